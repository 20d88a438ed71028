//! Builds `H(t)` on the walk subspace, checks that `t^A` is a zero-energy
//! ground state and prints the spectral gap. For small chains the full spin
//! space is diagonalized too.
//!
//! ```text
//! cargo run --release --example hamiltonian_gap -- 3 2 2.0
//! ```

use motzkin::hamiltonian::{
    build_h_full, build_h_subspace, full_space_spectrum, ground_state, spectral_gap,
    DEFAULT_FULL_SPACE_CAP,
};
use motzkin::linalg::EigenConfig;
use motzkin::walks::enumerate;
use motzkin::ModelParams;

fn main() -> motzkin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|a| a.parse().ok()).unwrap_or(3);
    let s = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let t = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(2.0);
    let params = ModelParams::new(n, s, t)?;
    let cfg = EigenConfig::default();

    // n = 1, s = 1 is a 2x2 problem with gap exactly 1.
    let small = ModelParams::new(1, 1, t)?;
    let e = enumerate(&small)?;
    let gap = spectral_gap(&build_h_subspace(&small, &e), None, &cfg)?.gap;
    println!("n=1 s=1 t={t}: gap {gap:.15}");

    let ensemble = enumerate(&params)?;
    let h = build_h_subspace(&params, &ensemble);
    let ground = ground_state(&params, &ensemble);
    let residual = h
        .matvec(&ground.amplitudes)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    println!("\n{params:?}");
    println!("  walks            {}", ensemble.len());
    println!("  ln Z             {:.12}", ground.log_z);
    println!("  max |H psi|      {residual:.3e}");

    let spec = spectral_gap(&h, Some(&ground.amplitudes), &cfg)?;
    println!("  gap              {:.12e}  ({})", spec.gap, spec.method.as_str());
    println!("  residuals        {:?}", spec.residuals);

    let full_dim = ((2 * s + 1) as u128).pow(2 * n as u32);
    if full_dim <= 10_000 {
        let full = build_h_full(&params, DEFAULT_FULL_SPACE_CAP)?;
        let fs = full_space_spectrum(&full, &cfg)?;
        println!("\nfull space: dim {} in {} blocks (largest {})", fs.dim, fs.blocks, fs.largest_block);
        println!("  zero modes       {}", fs.zero_modes);
        println!("  gap              {:.12e}", fs.gap);
        println!("  walk blocks      {:.12e}", fs.gap_walk_blocks);
        println!("  other blocks     {:.12e}", fs.gap_other_blocks);
    }
    Ok(())
}

//! L1 modulus of continuity and Fourier decay of the truncated kernel B^z.
use adapted_kernels::geometry::{AnisotropyParams, Vec2};
use adapted_kernels::multiplier::{bz_fourier_decay, bz_l1_lipschitz, BzContext};
use adapted_kernels::quad::log_space;
use num_complex::Complex64;

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    for re in [0.2, 0.3] {
        let bz = BzContext::new(p, Complex64::new(re, 0.0))?;
        println!("z = {re}: |B^z|_1 = {:.8}", bz.l1_norm()?);
        println!("{}", bz_l1_lipschitz(&bz, &log_space(1e-6, 1e-1, 11), 1e-8)?.summary());
        println!("{}", bz_fourier_decay(&bz, Vec2::new(0.6, 0.8), &log_space(1.0, 1e4, 9), 1e-8)?.summary());
    }
    Ok(())
}

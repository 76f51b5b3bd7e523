//! |Fourier transform of I^z| rho^{Re z} along a ray.
use adapted_kernels::checks::fourier_decay_check;
use adapted_kernels::geometry::{dilate2, AnisotropyParams, Vec2};
use adapted_kernels::quad::log_space;
use adapted_kernels::riesz::{FourierKernel, RieszContext};
use num_complex::Complex64;

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    let z = Complex64::new(0.2, 0.0);
    let kernel = FourierKernel::new(&RieszContext::new(p, z)?)?;
    let dir = Vec2::new(0.6, 0.8);
    for rho in log_space(1.0, 1e6, 7) {
        let xi = dilate2(&p, rho, dir)?;
        let v = kernel.eval(xi, 1e-10)?.value;
        println!("rho = {rho:8.0e} |F| rho^(Re z) = {:.8}", v.norm() * rho.powf(z.re));
    }
    println!("{}", fourier_decay_check(&p, z, dir, &log_space(1.0, 1e6, 13), 1e-10)?.summary());
    Ok(())
}

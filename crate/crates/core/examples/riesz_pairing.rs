//! <I^z, phi> across z, including the approach to phi(0) as z -> 0.
use adapted_kernels::checks::{delta_limit_check, homogeneity_check, AtomKind};
use adapted_kernels::geometry::AnisotropyParams;
use adapted_kernels::riesz::{pair_iz, RieszContext, SchwartzAtom};
use num_complex::Complex64;

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    let phi = SchwartzAtom::gaussian();
    for z in [0.7, 0.3, 0.1, 0.01, -0.1] {
        let ctx = RieszContext::new(p, Complex64::new(z, 0.0))?;
        let pr = pair_iz(&ctx, &phi, 1e-10)?;
        println!("z = {z:<5} <I^z, phi> = {:.10}", pr.value);
    }
    for r in homogeneity_check(&p, Complex64::new(0.7, 0.3), &[0.5, 2.0, 8.0], 1e-10)? {
        println!("{}", r.summary());
    }
    for r in delta_limit_check(&p, &[AtomKind::Gaussian, AtomKind::Shifted, AtomKind::Vanishing], 1e-10)? {
        println!("{}", r.summary());
    }
    Ok(())
}

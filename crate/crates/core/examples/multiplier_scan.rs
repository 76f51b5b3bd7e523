//! The multiplier sum K1 at a few frequencies and its dyadic invariance.
use adapted_kernels::dyadic::SeparableAtom;
use adapted_kernels::geometry::{dilate3, AnisotropyParams, Vec3};
use adapted_kernels::multiplier::MultiplierContext;

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    let ctx = MultiplierContext::new(SeparableAtom::standard(p)?);
    for xi in [Vec3::new(0.8, 0.5, -0.3), Vec3::new(-3.0, 0.1, 2.0), Vec3::new(0.05, -1.0, 0.2)] {
        let base = ctx.khat1(xi.x1, xi.x)?;
        let moved = dilate3(&p, 2f64.powi(6), xi)?;
        let dilated = ctx.khat1(moved.x1, moved.x)?;
        println!(
            "xi = ({:+.2}, {:+.2}, {:+.2}) K1 = {:.10} increment {:.1e} |K1(2^6 xi) - K1(xi)| = {:.1e}",
            xi.x1, xi.x.x, xi.x.y, base.value, base.increment, (dilated.value - base.value).norm()
        );
    }
    Ok(())
}

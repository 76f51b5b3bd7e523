//! m_J by direct quadrature against the one-dimensional identity.
use adapted_kernels::dyadic::{BetaProfile, SeparableAtom, Sidedness};
use adapted_kernels::geometry::AnisotropyParams;
use adapted_kernels::multiplier::{direct_multiplier, identity_cases, MultiplierContext};

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    let atom = SeparableAtom::new(p, 3, Sidedness::Positive, BetaProfile::GaussianLaplacian)?;
    let ctx = MultiplierContext::new(atom);
    for (index, xi1, xi) in identity_cases() {
        let (fast, _) = ctx.m_j(index, xi1, xi)?;
        let direct = direct_multiplier(ctx.atom(), index, xi1, xi, [48, 10])?;
        println!("{index:?} xi = ({xi1}, {}, {}): {fast:.12} vs {direct:.12}", xi.x, xi.y);
    }
    Ok(())
}

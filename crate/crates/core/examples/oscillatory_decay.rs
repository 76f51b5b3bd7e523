//! Decay of the curved oscillatory integral in the four regimes.
use adapted_kernels::dyadic::{BetaProfile, SeparableAtom, Sidedness};
use adapted_kernels::geometry::{AnisotropyParams, Vec3};
use adapted_kernels::oscillatory::{decay_scan, eta_decay_scan, regime_atom, DecayScan, Regime, GENERIC_DIRECTION};
use adapted_kernels::quad::log_space;

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    for regime in [Regime::Vdc, Regime::Small, Regime::Cone] {
        let r = decay_scan(&regime_atom(p, regime)?, &DecayScan::standard(regime))?;
        println!("{}", r.summary());
    }
    let xi = Vec3::new(10.0 * GENERIC_DIRECTION.x1, 10.0 * GENERIC_DIRECTION.x.x, 10.0 * GENERIC_DIRECTION.x.y);
    let atom = SeparableAtom::new(p, 3, Sidedness::Positive, BetaProfile::Annular)?;
    for r in eta_decay_scan(&atom, xi, &log_space(1e-4, 1e4, 41), &[0, 2, 4], 1e-13)? {
        println!("{}", r.summary());
    }
    Ok(())
}

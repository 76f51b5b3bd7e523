//! Besov-type quantities for the smoothed piece psi_0 = a(x1) (g * B^z)(x - gamma(x1)).
use adapted_kernels::geometry::AnisotropyParams;
use adapted_kernels::multiplier::besov_piece_reports;

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    for r in besov_piece_reports(p, 0.2, &[1e-3, 1e-2, 1e-1])? {
        println!("{}", r.summary());
    }
    Ok(())
}

//! The dyadic partition sum_j eta(2^j o u) along a ray, and the random check.
use adapted_kernels::checks::partition_check;
use adapted_kernels::dyadic::RadialPartition;
use adapted_kernels::geometry::{dilate2, AnisotropyParams, Vec2};

fn main() -> adapted_kernels::Result<()> {
    let p = AnisotropyParams::new(2, 3)?;
    let eta = RadialPartition::default();
    let u0 = Vec2::new(0.7, -0.4);
    for k in -6..=6 {
        let u = dilate2(&p, 2f64.powi(k), u0)?;
        let sum: f64 = (-40..=40).map(|j| eta.eta(&p, dilate2(&p, 2f64.powi(j), u).unwrap()).unwrap()).sum();
        println!("delta = 2^{k:<3} sum - 1 = {:+.2e}", sum - 1.0);
    }
    println!("{}", partition_check(&p, 1000, 7)?.summary());
    Ok(())
}

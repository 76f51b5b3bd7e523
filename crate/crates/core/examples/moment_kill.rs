//! Splits a bump into dyadic pieces with vanishing moments.
use adapted_kernels::checks::moment_test_bump;
use adapted_kernels::dyadic::moment_kill;

fn main() -> adapted_kernels::Result<()> {
    let mk = moment_kill(moment_test_bump, (1.0, 2.0), &[0, 1, 2, 3])?;
    let (lo, hi) = mk.active_range();
    for k in lo..=hi {
        let moments: Vec<String> = (0..=3).map(|l| format!("{:+.1e}", mk.piece_moment(k, l))).collect();
        println!("k = {k:<3} moments {}", moments.join(" "));
    }
    for x in [1.1, 1.5, 1.9] {
        println!("x = {x}: phi = {:.12}, sum of pieces = {:.12}", moment_test_bump(x), mk.reconstruct(x));
    }
    Ok(())
}

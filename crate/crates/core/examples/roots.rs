//! Bernstein-Sato roots and the pole structure of I^z for a few curves.
use adapted_kernels::bernstein_sato::RootSystem;
use adapted_kernels::geometry::AnisotropyParams;

fn main() -> adapted_kernels::Result<()> {
    for (m, n) in [(1, 2), (2, 3), (3, 5)] {
        let p = AnisotropyParams::new(m, n)?;
        let rs = RootSystem::new(&p, 1);
        println!("{}", serde_json::to_string_pretty(&rs).expect("serializable"));
    }
    Ok(())
}

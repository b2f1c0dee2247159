//! Dataset sources: generators, LIBSVM and CSV files, and declarative
//! specs that standardize on load.
//!
//! cargo run --release --example load_datasets -- [file.svm]

use adasgd::data::{gen_two_moons, parse_csv, parse_libsvm, write_libsvm, DatasetSpec};
use adasgd::problems::Dataset;

fn describe(ds: &Dataset) {
    let positives = ds.targets().iter().filter(|&&y| y > 0.0).count();
    println!(
        "  {}: N = {}, d = {}, binary = {}, positive targets = {positives}",
        ds.name,
        ds.n_samples(),
        ds.dim(),
        ds.is_binary()
    );
}

fn main() -> adasgd::Result<()> {
    let dir = std::env::temp_dir().join(format!("adasgd-datasets-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    println!("generated");
    let moons = gen_two_moons(3, 400, 0.1)?;
    describe(&moons);

    println!("LIBSVM round trip");
    let svm = dir.join("moons.svm");
    write_libsvm(&moons, &svm)?;
    let back = parse_libsvm(&svm, Some(moons.dim()))?;
    describe(&back);
    println!(
        "  lossless: {}",
        back.features() == moons.features() && back.targets() == moons.targets()
    );

    println!("CSV with a header, target in column 0");
    let csv = dir.join("table.csv");
    std::fs::write(&csv, "y,a,b\n1.5,0.1,2\n0.5,-0.3,1\n2.0,0.7,0\n")?;
    describe(&parse_csv(&csv, 0)?);

    println!("declarative spec, standardized");
    let mut spec = DatasetSpec::csv(&csv, Some(0));
    spec.standardize = true;
    let ds = spec.load()?;
    describe(&ds);
    println!("  first row {:?}", ds.row(0));

    if let Some(path) = std::env::args().nth(1) {
        println!("user file");
        describe(&parse_libsvm(path.as_ref(), None)?);
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

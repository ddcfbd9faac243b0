use tangle_kh::khovanov::{cube_oracle, kh, PDCode};

#[test]
fn pipeline_matches_oracle_everywhere() {
    let data = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/corpus.tsv"
    ))
    .unwrap();
    for line in data.lines() {
        let (name, code) = line.split_once('\t').unwrap();
        let pd = PDCode::parse(code).unwrap();
        let start = std::time::Instant::now();
        let oracle = cube_oracle(&pd).unwrap();
        let t_oracle = start.elapsed();
        let start = std::time::Instant::now();
        let complex = kh(&pd, true).unwrap_or_else(|e| panic!("{name}: kh failed: {e}"));
        let table = complex.homology_table().unwrap();
        let t_kh = start.elapsed();
        assert_eq!(table, oracle, "{name}: pipeline != oracle\npipeline:\n{table}\noracle:\n{oracle}");
        println!("{name}: ok (total {}), oracle {:?}, pipeline {:?}", table.total_dimension(), t_oracle, t_kh);
    }
}

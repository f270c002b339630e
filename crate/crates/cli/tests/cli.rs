use clap::Parser;
use cocenter_cli::{run, Cli};

fn report(args: &[&str]) -> (String, bool) {
    let cli = Cli::try_parse_from(std::iter::once("cocenter").chain(args.iter().copied())).unwrap();
    let out = run(&cli).unwrap();
    (out.report, out.ok)
}

fn pieces_column(r: &str) -> Vec<String> {
    r.lines().skip(2).filter(|l| !l.starts_with("rows")).map(|l| l.split('\t').nth(1).unwrap().to_string()).collect()
}

#[test]
fn pieces_a1_s1() {
    let (r, ok) = report(&["pieces", "--type", "A1:sc", "--J", "s1", "--max-len", "1"]);
    assert!(ok);
    assert!(r.starts_with("# cocenter pieces type=A1:sc J={s1} max-len=1 seed=2024\n"));
    let mut p = pieces_column(&r);
    p.dedup();
    assert_eq!(p, vec!["1/{s1}", "s0/{s1}"]);
}

#[test]
fn pieces_length_zero() {
    let (r, _) = report(&["pieces", "--type", "A1:ad", "--J", "", "--max-len", "0"]);
    assert_eq!(pieces_column(&r), vec!["1/{}", "ω1/{}"]);
    let (r, _) = report(&["pieces", "--type", "A1:sc", "--max-len", "0"]);
    assert_eq!(pieces_column(&r), vec!["1/{}"]);
}

#[test]
fn pieces_pgl2_length_one() {
    let (r, _) = report(&["pieces", "--type", "A1:ad", "--J", "", "--max-len", "1"]);
    let reps: Vec<&str> = r.lines().skip(2).filter(|l| !l.starts_with("rows")).map(|l| l.split('\t').next().unwrap()).collect();
    // every element of length at most one, each its own class for J = ∅
    assert_eq!(reps.len(), 6);
    assert!(r.ends_with("rows 6\n"));
}

#[test]
fn bcomplex_examples() {
    let (r, ok) = report(&["bcomplex", "--type", "A1:sc", "--nu", "1", "--L", "2"]);
    assert!(ok, "{r}");
    assert!(r.contains("facets 4 dim0=2 dim1=2"), "{r}");
    let (r, ok) = report(&["bcomplex", "--type", "A1:sc", "--nu", "0", "--L", "3", "--samples", "3"]);
    assert!(ok, "{r}");
    let flows: Vec<&str> = r.lines().filter(|l| l.starts_with("flow cut=")).collect();
    assert_eq!(flows.len(), 3, "{r}");
    assert!(flows.iter().all(|l| l.ends_with("violations=0")), "{r}");
    let (r, _) = report(&["bcomplex", "--type", "A1:ad", "--nu", "0", "--omega", "1", "--L", "1"]);
    assert!(r.contains("facets 3 dim0=2 dim1=1"), "{r}");
    let (r, _) = report(&["bcomplex", "--type", "A1:sc", "--nu", "0", "--L", "3", "--essential-only"]);
    assert!(r.contains("facets 3 dim0=2 dim1=1"), "{r}");
    for f in ["1/{} ", "1/{s0} ", "1/{s1} "] {
        assert!(r.contains(f), "{f}");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["bcomplex", "--type", "A2", "--nu", "0", "--L", "3", "--samples", "2", "--seed", "11"];
    assert_eq!(report(&args), report(&args));
    let (a, _) = report(&["bcomplex", "--type", "A2", "--nu", "0", "--L", "3", "--samples", "2", "--seed", "12"]);
    assert!(a.contains("seed=12"));
}

#[test]
fn verify_subset_and_unknown_names() {
    let (r, ok) = report(&["verify", "--only", "sl2-figures,pgl2"]);
    assert!(ok);
    assert_eq!(r.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    let cli = Cli::try_parse_from(["cocenter", "verify", "--only", "nope"]).unwrap();
    assert!(run(&cli).is_err());
}

#[test]
fn verify_with_corrupted_tables_fails() {
    let dir = std::env::temp_dir().join(format!("cocenter-tables-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../invariants/data");
    std::fs::copy(format!("{data}/chi.txt"), dir.join("chi.txt")).unwrap();
    // drop the nontrivial SO5 record
    let c = std::fs::read_to_string(format!("{data}/c.txt")).unwrap();
    let cut = c.find("side: c\ngroup: SO5\nindex: 1 mod 2").unwrap();
    let end = cut + c[cut..].find("\n\n").unwrap();
    std::fs::write(dir.join("c.txt"), format!("{}{}", &c[..cut], &c[end + 2..])).unwrap();
    let cli = Cli::try_parse_from(["cocenter", "verify", "--only", "dual", "--tables", dir.to_str().unwrap()]).unwrap();
    let out = run(&cli).unwrap();
    assert!(!out.ok);
    assert!(out.report.contains("FAIL 11 dual: Sp4/SO5"), "{}", out.report);

    let missing = dir.join("absent");
    let cli = Cli::try_parse_from(["cocenter", "verify", "--only", "dual", "--tables", missing.to_str().unwrap()]).unwrap();
    let out = run(&cli).unwrap();
    assert!(out.report.contains("chi.txt"), "{}", out.report);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_arguments() {
    for args in [
        vec!["pieces", "--type", "Z9"],
        vec!["pieces", "--type", "A1", "--J", "s7"],
        vec!["pieces", "--type", "A1", "--J", "s0,s1"],
        vec!["bcomplex", "--type", "A1", "--nu", "x"],
        vec!["bcomplex", "--type", "A1", "--nu", "-1"],
        vec!["bcomplex", "--type", "A1", "--omega", "3"],
    ] {
        let cli = Cli::try_parse_from(std::iter::once("cocenter").chain(args.iter().copied())).unwrap();
        assert!(run(&cli).is_err(), "{args:?}");
    }
}

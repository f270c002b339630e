//! The verification suite. Each check returns pass/fail with a one-line
//! summary; runtime limits are part of the pass condition.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cocenter_core::bcomplex::{
    build_truncated_b, check_flow_specs, essential_length, facet_barycenter, sample_in_facet, ApartmentChart, DownwardSpec, SigmaCache,
    TruncatedBComplex,
};
use cocenter_core::oracle::{affine_weyl_ball, bfs_lengths, conjugate_by_word, straight_by_powers};
use cocenter_core::pieces::{bedard_from_min_rep, delta, i_of, is_subset, newton_point, sigma_j, e_jw};
use cocenter_core::scalar::{rat, ratio, Scalar};
use cocenter_core::{AffineSystem, BigRational, ExactChart, FloatChart};
use cocenter_homotopy::collapse::replay;
use cocenter_homotopy::poset::dn_j_indices;
use cocenter_homotopy::{
    build_dn, build_dn_j, is_acyclic, is_weak_elementary_expansion, random_pair, rational_homology, verify_collapse, whitehead_collapse,
    SimplicialComplex,
};
use cocenter_invariants::matching::{pair_records, DUAL_PAIRS};
use cocenter_invariants::{load_table_dir, match_tables, orbit_series, orbit_series_by_union_find, shipped_tables, PairDatum};

use crate::{Outcome, VerifyArgs};

/// Suite parameters.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub tables: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 2024, samples: 5, tables: None }
    }
}

pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub limit: Option<Duration>,
    run: fn(&SuiteConfig) -> Result<String>,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl CheckResult {
    /// Deterministic line for reports.
    pub fn line(&self) -> String {
        format!("{} {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }

    pub fn timing(&self) -> String {
        match self.limit {
            Some(l) => format!("{:>2} {} {:.3}s (limit {}s)", self.id, self.name, self.elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:>2} {} {:.3}s", self.id, self.name, self.elapsed.as_secs_f64()),
        }
    }
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

pub const CHECKS: &[Check] = &[
    Check { id: 1, name: "sl2-figures", limit: secs(1), run: sl2_figures },
    Check { id: 2, name: "pgl2", limit: secs(1), run: pgl2 },
    Check { id: 3, name: "sigma", limit: secs(30), run: sigma_class_function },
    Check { id: 4, name: "bedard", limit: None, run: bedard },
    Check { id: 5, name: "delta", limit: None, run: delta_coherence },
    Check { id: 6, name: "newton", limit: None, run: newton_length },
    Check { id: 7, name: "gradient", limit: None, run: gradient },
    Check { id: 8, name: "flow", limit: secs(60), run: flow },
    Check { id: 9, name: "appendix", limit: None, run: appendix },
    Check { id: 10, name: "collapse", limit: None, run: collapse },
    Check { id: 11, name: "dual", limit: secs(30), run: dual },
    Check { id: 12, name: "oracles", limit: None, run: oracles },
];

pub fn run_check(c: &Check, cfg: &SuiteConfig) -> CheckResult {
    let t = Instant::now();
    let res = (c.run)(cfg);
    let elapsed = t.elapsed();
    let (mut passed, mut detail) = match res {
        Ok(d) => (true, d),
        Err(e) => (false, format!("{e:#}")),
    };
    if let Some(l) = c.limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; time limit {}s exceeded", l.as_secs());
        }
    }
    CheckResult { id: c.id, name: c.name, passed, detail, elapsed, limit: c.limit }
}

/// Checks selected by `--only`; unknown names are an error.
pub fn select(only: &[String]) -> Result<Vec<&'static Check>> {
    if only.is_empty() {
        return Ok(CHECKS.iter().collect());
    }
    for name in only {
        if !CHECKS.iter().any(|c| c.name == name || c.id.to_string() == *name) {
            let names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
            bail!("unknown check '{name}' (known: {})", names.join(", "));
        }
    }
    Ok(CHECKS.iter().filter(|c| only.iter().any(|n| c.name == n || c.id.to_string() == *n)).collect())
}

/// Run the selected checks, each on its own thread when `parallel`, and
/// report in suite order.
pub fn run_suite(checks: &[&'static Check], cfg: &SuiteConfig, parallel: bool) -> Vec<CheckResult> {
    if !parallel {
        return checks.iter().map(|c| run_check(c, cfg)).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|c| s.spawn(move || run_check(c, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread")).collect()
    })
}

pub fn cmd_verify(a: &VerifyArgs, seed: u64, parallel: bool) -> Result<Outcome> {
    let checks = select(&a.only)?;
    let cfg = SuiteConfig { seed, samples: a.samples, tables: a.tables.clone() };
    let results = run_suite(&checks, &cfg, parallel);
    let mut report = String::new();
    let mut console = String::new();
    for r in &results {
        writeln!(report, "{}", r.line()).unwrap();
        writeln!(console, "time {}", r.timing()).unwrap();
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(report, "{} checks, {} failed", results.len(), failed).unwrap();
    Ok(Outcome { report, console, ok: failed == 0 })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(anyhow!(msg()))
    }
}

fn sys(t: &str) -> Result<AffineSystem> {
    AffineSystem::parse(t).map_err(|e| anyhow!("{t}: {e}"))
}

fn names(s: &AffineSystem, b: &TruncatedBComplex, idx: &[usize]) -> BTreeSet<String> {
    idx.iter().map(|&i| b.render(s, i)).collect()
}

fn set(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Vertices and edges of a one-dimensional truncation, as a graph.
fn graph(b: &TruncatedBComplex) -> (Vec<usize>, Vec<usize>, Vec<Vec<usize>>) {
    let vertices = b.facets_with_j_size(1);
    let edges = b.facets_with_j_size(0);
    let ends = edges.iter().map(|&e| b.order.iter().filter(|(a, _)| *a == e).map(|(_, v)| *v).collect()).collect();
    (vertices, edges, ends)
}

fn connected(vertices: &[usize], ends: &[Vec<usize>]) -> bool {
    let Some(&start) = vertices.first() else { return true };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for e in ends.iter().filter(|e| e.contains(&v)) {
            for &w in e {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    seen.len() == vertices.len()
}

fn sl2_figures(_: &SuiteConfig) -> Result<String> {
    let s = sys("A1:sc")?;
    let nu1 = newton_point(&s, &s.parse_element("s1 s0")?);
    let b1 = build_truncated_b(&s, &nu1, 2)?;
    let all1: Vec<usize> = (0..b1.facets.len()).collect();
    ensure(names(&s, &b1, &all1) == set(&["s1 s0/{}", "s0 s1/{}", "s1 s0/{s0}", "s0 s1/{s1}"]), || {
        format!("nu=1 facets {:?}", names(&s, &b1, &all1))
    })?;
    let (v, e, ends) = graph(&b1);
    ensure(v.len() == 2 && e.len() == 2, || "nu=1: expected 2 vertices and 2 edges".into())?;
    ensure(ends.iter().all(|x| x.len() == 2 && x[0] != x[1]) && connected(&v, &ends), || "nu=1: not a cycle".into())?;

    let nu0 = newton_point(&s, &s.identity());
    let b0 = build_truncated_b(&s, &nu0, 3)?;
    let (v, e, ends) = graph(&b0);
    ensure(
        names(&s, &b0, &v) == set(&["1/{s1}", "s1/{s0}", "s0 s1 s0/{s1}", "1/{s0}", "s0/{s1}", "s1 s0 s1/{s0}"]),
        || format!("nu=0 vertices {:?}", names(&s, &b0, &v)),
    )?;
    ensure(names(&s, &b0, &e) == set(&["1/{}", "s1/{}", "s0/{}", "s0 s1 s0/{}", "s1 s0 s1/{}"]), || {
        format!("nu=0 edges {:?}", names(&s, &b0, &e))
    })?;
    ensure(ends.iter().all(|x| x.len() == 2) && connected(&v, &ends) && e.len() + 1 == v.len(), || "nu=0: not a tree".into())?;
    let ess = names(&s, &b0, &b0.essential_part());
    ensure(ess == set(&["1/{}", "1/{s0}", "1/{s1}"]), || format!("essential part {ess:?}"))?;
    Ok("cycle 2+2, tree 6+5, essential {1/{}, 1/{s0}, 1/{s1}}".into())
}

fn pgl2(_: &SuiteConfig) -> Result<String> {
    let s = sys("A1:ad")?;
    // lattice coordinate c in the coweight basis: ν = (c/2) α^∨
    let mut seen = BTreeSet::new();
    for w in s.elements_up_to(4) {
        let nu = newton_point(&s, &w);
        seen.insert((nu.nu[0].clone(), nu.omega.index));
    }
    let mut expected: BTreeSet<(BigRational, usize)> = (0..=4).map(|n| (rat(n), n as usize % 2)).collect();
    expected.insert((rat(0), 1));
    ensure(seen == expected, || format!("newton points {seen:?}"))?;
    let om = s.omega_group()[1].rep.clone();
    let nu = newton_point(&s, &om);
    let b = build_truncated_b(&s, &nu, 1)?;
    let all: Vec<usize> = (0..b.facets.len()).collect();
    let want = set(&["ω1/{}", "ω1/{s0}", "ω1/{s1}"]);
    ensure(names(&s, &b, &all) == want, || format!("truncation {:?}", names(&s, &b, &all)))?;
    let (v, e, ends) = graph(&b);
    ensure(v.len() == 2 && e.len() == 1 && ends[0].len() == 2, || "not a single edge".into())?;
    ensure(names(&s, &b, &b.essential_part()) == want, || "essential part differs".into())?;
    Ok(format!("{} newton points (n/2, n mod 2) and (0, ω1); ω-edge with both ends essential", seen.len()))
}

const TYPES: [&str; 3] = ["A1", "A2", "C2"];

fn sigma_class_function(cfg: &SuiteConfig) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut total = 0;
    for t in TYPES {
        let s = sys(t)?;
        let els = s.elements_up_to(8);
        for j in s.finite_type_subsets() {
            for _ in 0..500 {
                let w = &els[rng.gen_range(0..els.len())];
                let len = rng.gen_range(0..=6);
                let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..8)).collect();
                let w2 = conjugate_by_word(&s, j, w, &word);
                let (a, b) = (sigma_j(&s, j, w)?, sigma_j(&s, j, &w2)?);
                ensure(a == b, || format!("{t} J={}: {} vs {}", s.render_set(j), a.render(&s), b.render(&s)))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} conjugate pairs agree"))
}

fn bedard(_: &SuiteConfig) -> Result<String> {
    let mut total = 0;
    for t in TYPES {
        let s = sys(t)?;
        let els = s.elements_up_to(6);
        for j in s.finite_type_subsets() {
            for u in els.iter().filter(|u| s.is_min_left(j, u)) {
                let p = bedard_from_min_rep(&s, j, u)?;
                let prod = p.bedard.iter().fold(s.identity(), |acc, st| acc.mul(&st.u));
                ensure(&prod == u, || format!("{t}: sequence of {} multiplies to {}", s.render(u), s.render(&prod)))?;
                let q = sigma_j(&s, j, u)?;
                ensure(&q.u == u && q.j == j, || format!("{t}: sigma({}) = {}", s.render(u), q.render(&s)))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} minimal representatives recovered"))
}

fn delta_coherence(_: &SuiteConfig) -> Result<String> {
    let mut total = 0;
    for t in TYPES {
        let s = sys(t)?;
        let subsets = s.finite_type_subsets();
        for w in s.elements_up_to(6) {
            let pieces: Vec<_> = subsets.iter().map(|&j| sigma_j(&s, j, &w)).collect::<Result<_, _>>()?;
            for (a, &j) in subsets.iter().enumerate() {
                for (b, &j2) in subsets.iter().enumerate() {
                    if !is_subset(j, j2) {
                        continue;
                    }
                    let d = delta(&s, j2, &pieces[a])?;
                    ensure(d == pieces[b], || format!("{t}: delta of {} to {}", pieces[a].render(&s), s.render_set(j2)))?;
                    ensure(delta(&s, j2, &d)? == d, || format!("{t}: delta not idempotent on {}", d.render(&s)))?;
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} (piece, J') pairs coherent"))
}

fn newton_length(_: &SuiteConfig) -> Result<String> {
    let (mut straight, mut cosets) = (0, 0);
    for t in TYPES {
        let s = sys(t)?;
        let els = s.elements_up_to(6);
        for w in &els {
            let nu = newton_point(&s, w);
            let pair = s.datum().pair_two_rho(&nu.nu);
            let l = rat(s.length(w) as i64);
            ensure(l >= pair, || format!("{t}: length below <2rho,nu> at {}", s.render(w)))?;
            let st = straight_by_powers(&s, w);
            ensure((l == pair) == st, || format!("{t}: equality vs straightness at {}", s.render(w)))?;
            straight += st as usize;
        }
        for j in s.finite_type_subsets() {
            for u in els.iter().filter(|u| s.is_min_left(j, u)) {
                let i = i_of(&s, j, u)?;
                let nu = newton_point(&s, u);
                for y in s.parabolic(i)?.iter() {
                    ensure(newton_point(&s, &u.mul(y)) == nu, || format!("{t}: newton point moves on {}·W_I", s.render(u)))?;
                    cosets += 1;
                }
            }
        }
    }
    Ok(format!("{straight} straight elements, {cosets} coset elements"))
}

fn gradient(cfg: &SuiteConfig) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    let mut restricted = 0;
    for t in TYPES {
        let s = sys(t)?;
        let els = s.elements_up_to(5);
        let f: cocenter_core::Matrix<f64> = s.datum().form_as();
        for _ in 0..100 {
            let w = &els[rng.gen_range(0..els.len())];
            let c: FloatChart = ExactChart::from_element(&s, w).convert();
            let x: Vec<f64> = (0..s.rank()).map(|_| ratio(rng.gen_range(-40..=40), rng.gen_range(1..=9)).to_f64()).collect();
            let g = f.mul_vec(&c.gradient_closed_form(&x));
            let h = 1e-5;
            let mut err = 0.0f64;
            for i in 0..x.len() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[i] += h;
                xm[i] -= h;
                let fd = (c.value(&xp)? - c.value(&xm)?) / (2.0 * h);
                err = err.max((fd - g[i]).abs());
            }
            let scale = g.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            worst = worst.max(err / scale);
        }
        for w in s.elements_up_to(3) {
            let c = ExactChart::from_element(&s, &w);
            for j in s.finite_type_subsets() {
                let e = e_jw(&s, j, &w)?;
                let r = c.restrict(&e)?;
                let mut x = e.point().to_vec();
                for b in e.basis() {
                    x = cocenter_core::linalg::axpy(&x, &ratio(rng.gen_range(-9..=9), 4), b);
                }
                ensure(r.gradient(&x)? == c.gradient(&x)?, || format!("{t}: restriction changes the gradient at {}", s.render(&w)))?;
                restricted += 1;
            }
        }
    }
    ensure(worst < 1e-8, || format!("relative error {worst:.2e}"))?;
    Ok(format!("max relative error {worst:.1e} < 1e-8 over 300 points; {restricted} restrictions exact"))
}

/// Flow lines from sample points of open facets `y·F_J` in charts
/// `(𝔄, w)`, for each length cut above the essential length.
pub fn flow_window(s: &AffineSystem, max_w: usize, window: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<(usize, Vec<String>)> {
    let ys = affine_weyl_ball(s, window);
    let subsets = s.finite_type_subsets();
    let mut cache = SigmaCache::default();
    let mut checked = 0;
    let mut bad = Vec::new();
    for w in s.elements_up_to(max_w) {
        let chart = ApartmentChart::<BigRational>::from_element(s, &w);
        let nu = newton_point(s, &w);
        let e = essential_length(s, &nu);
        let specs: Vec<DownwardSpec> = (e + 1..=e + 3).map(|n| DownwardSpec::length_cut(s, &nu, n)).collect();
        for y in &ys {
            for &j in &subsets {
                if !s.is_min_left(j, &y.inverse()) {
                    continue;
                }
                let (fj, fu) = chart.facet_key(s, &y.act(&facet_barycenter(s, j)), &mut cache)?;
                let piece = cache.piece(s, fj, &fu)?;
                let active: Vec<&DownwardSpec> = specs.iter().filter(|sp| sp.contains(s, &piece).unwrap_or(false)).collect();
                if active.is_empty() {
                    continue;
                }
                for _ in 0..samples {
                    let x = y.act(&sample_in_facet(s, j, rng));
                    for (sp, r) in active.iter().zip(check_flow_specs(s, &chart, &x, &active, 8, &mut cache)?) {
                        checked += 1;
                        for v in r.violations {
                            bad.push(format!("chart {} cut {}: {v}", s.render(&w), sp.max_length()));
                        }
                    }
                }
            }
        }
    }
    Ok((checked, bad))
}

fn flow(cfg: &SuiteConfig) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut total = 0;
    for (t, window) in [("A1", 6), ("A2", 2)] {
        let s = sys(t)?;
        let (n, bad) = flow_window(&s, 6, window, cfg.samples, &mut rng)?;
        ensure(bad.is_empty(), || format!("{t}: {} violations, first: {}", bad.len(), bad[0]))?;
        total += n;
    }
    Ok(format!("{total} flow lines, 0 violations"))
}

fn nonempty_proper_subsets(n: usize) -> Vec<Vec<usize>> {
    let full = (1u32 << (n + 1)) - 1;
    (1..full).map(|m| (0..=n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn appendix(_: &SuiteConfig) -> Result<String> {
    let mut total = 0;
    for n in 1..=4 {
        for j in nonempty_proper_subsets(n) {
            let nerve = build_dn_j(n, &j)?.nerve();
            let h = rational_homology(&nerve);
            ensure(is_acyclic(&nerve) && h.first() == Some(&1), || format!("n={n} J={j:?}: homology {h:?}"))?;
            total += 1;
        }
    }
    let d1 = build_dn(1);
    let sub: Vec<bool> = (0..d1.len()).map(|i| d1.label(i) == "{0}").collect();
    ensure(is_weak_elementary_expansion(&d1, &sub), || "{{0}} in D_1 is not a weak elementary expansion".into())?;
    ensure(is_weak_elementary_expansion(&build_dn(3), &dn_j_indices(3, &[0])?), || "D_3^{0} in D_3".into())?;
    let b = rational_homology(&SimplicialComplex::sphere(1));
    ensure(b == vec![1, 1], || format!("hollow triangle {b:?}"))?;
    Ok(format!("{total} complexes acyclic and connected; hollow triangle b = (1, 1)"))
}

fn collapse(cfg: &SuiteConfig) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut steps = 0;
    for i in 0..10 {
        let (y, z) = random_pair(&mut rng, 8);
        let w = whitehead_collapse(&y, &z)?;
        verify_collapse(&w.star, &w.sequence, &w.z2).map_err(|e| anyhow!("pair {i}: {e}"))?;
        let b = rational_homology(&w.z2);
        let states = replay(&w.star, &w.sequence);
        for k in &states {
            let h = rational_homology(k);
            ensure(h[..b.len()] == b[..] && h[b.len()..].iter().all(|&x| x == 0), || format!("pair {i}: Betti numbers change"))?;
        }
        ensure(states.last() == Some(&w.z2), || format!("pair {i}: does not end at sd²(Z)"))?;
        steps += w.sequence.len();
    }
    Ok(format!("10 pairs, {steps} elementary collapses, Betti numbers constant"))
}

fn load_tables(cfg: &SuiteConfig) -> Result<Vec<PairDatum>> {
    match &cfg.tables {
        Some(dir) => Ok(load_table_dir(dir)?),
        None => Ok(shipped_tables()),
    }
}

fn dual(cfg: &SuiteConfig) -> Result<String> {
    let t = load_tables(cfg)?;
    let mut matched = 0;
    for &(g, gd) in DUAL_PAIRS {
        let (chi, c) = pair_records(&t, g, gd);
        if chi.is_empty() && c.is_empty() {
            continue;
        }
        let m = match_tables(&chi, &c, 3);
        ensure(m.ok(), || format!("{g}/{gd}: {}", m.render().trim_end().replace('\n', "; ")))?;
        matched += 1;
    }
    ensure(matched > 0, || "no dual pairs in the tables".into())?;
    let (chi, _) = pair_records(&t, "SL2", "PGL2");
    let principal = chi.iter().find(|p| p.index == 0).ok_or_else(|| anyhow!("no principal SL2 record"))?;
    let n = orbit_series(principal, 3).counts;
    ensure(n == [1, 5, 13, 25] && orbit_series_by_union_find(principal, 3) == n, || format!("SL2 principal series {n:?}"))?;
    Ok(format!("{matched} dual pairs matched to R = 3; SL2 principal series (1, 5, 13, 25)"))
}

fn oracles(cfg: &SuiteConfig) -> Result<String> {
    let mut lengths = 0;
    for t in ["A1", "A1:ad", "A2", "C2", "G2"] {
        let s = sys(t)?;
        for (x, d) in bfs_lengths(&s, 6) {
            ensure(s.length(&x) == d, || format!("{t}: length of {} is {} by BFS, {} by inversions", s.render(&x), d, s.length(&x)))?;
            lengths += 1;
        }
    }
    let mut records = 0;
    for p in load_tables(cfg)?.iter().filter(|p| p.rank <= 2) {
        let (a, b) = (orbit_series(p, 3).counts, orbit_series_by_union_find(p, 3));
        ensure(a == b, || format!("{}: Burnside {a:?} vs union-find {b:?}", p.label()))?;
        records += 1;
    }
    Ok(format!("{lengths} lengths agree with BFS; {records} records agree with union-find"))
}

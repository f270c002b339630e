//! Matching χ-side and c-side records by fingerprint.

use std::fmt::Write;

use crate::series::{exact_div, profile, series_from_profile, OrbitSeries};
use crate::table::{PairDatum, Side};

/// Dual pairs of groups with shipped tables, as (χ-side group, c-side group).
pub const DUAL_PAIRS: &[(&str, &str)] =
    &[("SL2", "PGL2"), ("SL3", "PGL3"), ("SL4", "PGL4"), ("SL5", "PGL5"), ("Sp4", "SO5"), ("G2", "G2")];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFingerprint {
    pub label: String,
    pub rank: usize,
    pub order: usize,
    pub series: OrbitSeries,
    /// `d[k][j] = (1/|W|) Σ_g #Fix_{Λ²}(g; k) · tr(g | Λʲ)`.
    pub bigraded: Vec<Vec<u64>>,
}

impl BlockFingerprint {
    pub fn of(p: &PairDatum, radius: usize) -> Self {
        let pr = profile(p, radius);
        let series = series_from_profile(&pr, p.rank);
        let bigraded = (0..=radius)
            .map(|k| {
                (0..=p.rank)
                    .map(|j| {
                        let total: i128 = pr.fixed.iter().zip(&pr.traces).map(|(f, t)| (f[k] as i128).pow(2) * t[j]).sum();
                        exact_div(total, pr.order, "bigraded dimension")
                    })
                    .collect()
            })
            .collect();
        BlockFingerprint { label: p.label(), rank: p.rank, order: p.order, series, bigraded }
    }

    /// The data compared across the two sides.
    pub fn key(&self) -> (usize, usize, &[u64], &[u64]) {
        (self.rank, self.order, &self.series.counts, &self.series.exterior)
    }

    pub fn render(&self) -> String {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let d: Vec<String> = self.bigraded.iter().map(|row| format!("({})", join(row))).collect();
        format!(
            "{} r={} |W|={} region={} N=({}) e=({}) d=[{}]",
            self.label,
            self.rank,
            self.order,
            self.series.region,
            join(&self.series.counts),
            join(&self.series.exterior),
            d.join(" ")
        )
    }
}

/// Fingerprints of all records, computed on separate threads.
pub fn fingerprints(table: &[PairDatum], radius: usize) -> Vec<BlockFingerprint> {
    std::thread::scope(|s| {
        let handles: Vec<_> = table.iter().map(|p| s.spawn(move || BlockFingerprint::of(p, radius))).collect();
        handles.into_iter().map(|h| h.join().expect("fingerprint thread")).collect()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndomorphismReport {
    pub blocks: Vec<BlockFingerprint>,
}

impl EndomorphismReport {
    pub fn render(&self) -> String {
        self.blocks.iter().map(|b| b.render() + "\n").collect()
    }
}

/// The direct sum over records of the per-block fingerprints.
pub fn endomorphism_fingerprint(table: &[PairDatum], radius: usize) -> EndomorphismReport {
    EndomorphismReport { blocks: fingerprints(table, radius) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchReport {
    pub chi: Vec<BlockFingerprint>,
    pub c: Vec<BlockFingerprint>,
    /// Order of the fundamental group read off the c-side index labels.
    pub expected_count: Option<u32>,
    pub dim_sum_chi: usize,
    pub dim_sum_c: usize,
    /// Index pairs `(chi, c)`.
    pub matching: Vec<(usize, usize)>,
    pub orphans_chi: Vec<usize>,
    pub orphans_c: Vec<usize>,
    pub alternating_ok: bool,
}

impl MatchReport {
    pub fn counts_ok(&self) -> bool {
        self.chi.len() == self.c.len() && self.expected_count.is_some_and(|n| n as usize == self.c.len())
    }

    pub fn dims_ok(&self) -> bool {
        self.dim_sum_chi == self.dim_sum_c
    }

    pub fn ok(&self) -> bool {
        self.counts_ok() && self.dims_ok() && self.orphans_chi.is_empty() && self.orphans_c.is_empty() && self.alternating_ok
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let exp = self.expected_count.map_or("?".to_string(), |n| n.to_string());
        writeln!(out, "records chi={} c={} expected={} {}", self.chi.len(), self.c.len(), exp, if self.counts_ok() { "ok" } else { "FAIL" }).unwrap();
        writeln!(out, "sum 2r chi={} c={} {}", self.dim_sum_chi, self.dim_sum_c, if self.dims_ok() { "ok" } else { "FAIL" }).unwrap();
        for &(a, b) in &self.matching {
            writeln!(out, "match {} <-> {}", self.chi[a].label, self.c[b].label).unwrap();
        }
        for &a in &self.orphans_chi {
            writeln!(out, "orphan {}", self.chi[a].render()).unwrap();
        }
        for &b in &self.orphans_c {
            writeln!(out, "orphan {}", self.c[b].render()).unwrap();
        }
        if !self.alternating_ok {
            writeln!(out, "alternating sum check FAIL").unwrap();
        }
        out
    }
}

/// Match records with equal fingerprints, greedily in table order.
pub fn match_tables(chi: &[PairDatum], c: &[PairDatum], radius: usize) -> MatchReport {
    let fchi = fingerprints(chi, radius);
    let fc = fingerprints(c, radius);
    let moduli: Vec<u32> = c.iter().map(|p| p.modulus).collect();
    let expected_count = moduli.first().copied().filter(|m| moduli.iter().all(|x| x == m));
    let mut used = vec![false; fc.len()];
    let mut matching = Vec::new();
    let mut orphans_chi = Vec::new();
    for (a, x) in fchi.iter().enumerate() {
        match (0..fc.len()).find(|&b| !used[b] && fc[b].key() == x.key()) {
            Some(b) => {
                used[b] = true;
                matching.push((a, b));
            }
            None => orphans_chi.push(a),
        }
    }
    let orphans_c = (0..fc.len()).filter(|&b| !used[b]).collect();
    let alternating_ok = fchi.iter().chain(&fc).all(|f| f.series.alternating_ok);
    MatchReport {
        dim_sum_chi: chi.iter().map(|p| 2 * p.rank).sum(),
        dim_sum_c: c.iter().map(|p| 2 * p.rank).sum(),
        chi: fchi,
        c: fc,
        expected_count,
        matching,
        orphans_chi,
        orphans_c,
        alternating_ok,
    }
}

/// The χ-side and c-side records of one dual pair.
pub fn pair_records(table: &[PairDatum], chi_group: &str, c_group: &str) -> (Vec<PairDatum>, Vec<PairDatum>) {
    let pick = |side: Side, g: &str| table.iter().filter(|p| p.side == side && p.group == g).cloned().collect();
    (pick(Side::Chi, chi_group), pick(Side::C, c_group))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::shipped_tables;

    #[test]
    fn sl2_blocks() {
        let t = shipped_tables();
        let (chi, _) = pair_records(&t, "SL2", "PGL2");
        let r = endomorphism_fingerprint(&chi, 1);
        assert_eq!(r.blocks[0].series.counts, vec![1, 5]);
        assert_eq!(r.blocks[0].series.exterior, vec![1, 0]);
        // degree 1 of t[-1]: orbit pairs twisted by the sign character
        assert_eq!(r.blocks[0].bigraded, vec![vec![1, 0], vec![5, 4]]);
        assert_eq!(r.blocks[1].series.counts, vec![1, 1]);
        assert_eq!(r.blocks[1].series.exterior, vec![1]);
    }

    #[test]
    fn sl2_pgl2_match() {
        let t = shipped_tables();
        let (chi, c) = pair_records(&t, "SL2", "PGL2");
        let m = match_tables(&chi, &c, 3);
        assert!(m.ok(), "{}", m.render());
        assert_eq!(m.matching, vec![(0, 0), (1, 1)]);
    }
}

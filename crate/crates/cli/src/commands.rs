//! The `pieces` and `bcomplex` commands.

use std::fmt::Write;

use anyhow::{anyhow, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cocenter_core::bcomplex::{build_truncated_b, essential_length, verify_contraction, DownwardSpec};
use cocenter_core::pieces::enumerate_classes;

use crate::{parse_newton, parse_system, BcomplexArgs, Outcome, PiecesArgs};

pub fn cmd_pieces(a: &PiecesArgs) -> Result<Outcome> {
    let sys = parse_system(&a.ty)?;
    let j = sys.parse_set(&a.j).map_err(|e| anyhow!("--J: {e}"))?;
    if !sys.is_finite_type(j) {
        return Err(anyhow!("--J {} does not generate a finite group", sys.render_set(j)));
    }
    let rows = enumerate_classes(&sys, j, a.max_len).map_err(|e| anyhow!("{e}"))?;
    let mut out = String::new();
    writeln!(out, "rep\tpiece\tlen\tnewton\tK\ttype").unwrap();
    for (w, p) in &rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t[{}]",
            sys.render(w),
            p.render(&sys),
            p.length,
            p.newton,
            sys.render_set(p.k),
            sys.render_set(p.coarse_type.rep)
        )
        .unwrap();
    }
    writeln!(out, "rows {}", rows.len()).unwrap();
    Ok(Outcome { report: out, console: String::new(), ok: true })
}

pub fn cmd_bcomplex(a: &BcomplexArgs, seed: u64) -> Result<Outcome> {
    let sys = parse_system(&a.ty)?;
    let nu = parse_newton(&sys, &a.nu, a.omega)?;
    let b = build_truncated_b(&sys, &nu, a.l).map_err(|e| anyhow!("{e}"))?;
    let e = essential_length(&sys, &nu);
    let shown: Vec<usize> = (0..b.facets.len()).filter(|&i| !a.essential_only || b.essential[i]).collect();
    let mut out = String::new();
    writeln!(out, "newton {nu} essential-length {e}").unwrap();
    for &i in &shown {
        let p = &b.facets[i];
        writeln!(
            out,
            "facet {i} {} dim={} len={}{}",
            b.render(&sys, i),
            p.facet_dim(&sys),
            p.length,
            if b.essential[i] { " essential" } else { "" }
        )
        .unwrap();
    }
    for &(x, y) in &b.order {
        if shown.contains(&x) && shown.contains(&y) {
            writeln!(out, "face {} < {}", b.render(&sys, y), b.render(&sys, x)).unwrap();
        }
    }
    let max_dim = shown.iter().map(|&i| b.facets[i].facet_dim(&sys)).max();
    let mut counts = Vec::new();
    if let Some(m) = max_dim {
        for d in 0..=m {
            counts.push(format!("dim{d}={}", shown.iter().filter(|&&i| b.facets[i].facet_dim(&sys) == d).count()));
        }
    }
    writeln!(out, "facets {} {}", shown.len(), counts.join(" ")).unwrap();
    let mut ok = true;
    if a.samples > 0 && a.l <= e {
        writeln!(out, "flow: no length cut between {e} and L = {}", a.l).unwrap();
    }
    if a.samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in e + 1..=a.l {
            let spec = DownwardSpec::length_cut(&sys, &nu, n);
            let rep = verify_contraction(&sys, &b, &spec, a.samples, 8, &mut rng).map_err(|e| anyhow!("{e}"))?;
            writeln!(out, "flow cut={n} samples={} violations={}", rep.samples.len(), rep.violations()).unwrap();
            for s in rep.samples.iter().filter(|s| !s.violations.is_empty()) {
                writeln!(out, "  chart {} from {}: {}", s.chart, s.start_piece, s.violations.join("; ")).unwrap();
            }
            ok &= rep.violations() == 0;
        }
    }
    Ok(Outcome { report: out, console: String::new(), ok })
}

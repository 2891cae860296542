//! `segre selftest`: recomputes the published tables and runs the cheap
//! property checks, one line per item.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use segre_syz::bott::{bwb_cohomology, schur_dim, BottResult};
use segre_syz::golden;
use segre_syz::koszul::hilbert_consistency;
use segre_syz::pfunc::{p_closed_equal, p_function, predicts_zero, vanishing_bound};
use segre_syz::witness::{verify_witness, CycleSpec};
use segre_syz::{ArtinianRing, BettiTable, DimVector, ExtNat, KoszulComplex, Monomial, TableOptions};

#[derive(Debug)]
pub struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("self-test failed")
    }
}

impl std::error::Error for Failed {}

type Check = Result<(), String>;
type NamedCheck = (&'static str, fn() -> Check);

fn dv(s: &str) -> DimVector {
    s.parse().expect("literal dimension vector")
}

fn table_check(dims: &str, expected: &str, tables: &mut BTreeMap<String, BettiTable>) -> Check {
    let a = dv(dims);
    let k = KoszulComplex::new(a.clone()).map_err(|e| e.to_string())?;
    let t = k.betti_table(&TableOptions::default()).map_err(|e| e.to_string())?;
    if t.to_m2() != expected {
        return Err(format!("got\n{}", t.to_m2()));
    }
    if !hilbert_consistency(&a, &t) {
        return Err("Euler characteristic identity fails".into());
    }
    if let Some((p, q, _)) = t.cells().find(|&(p, q, d)| d != 0 && predicts_zero(&a, p, q as i64)) {
        return Err(format!("K_{p},{q} nonzero below the vanishing bound"));
    }
    tables.insert(dims.to_string(), t);
    Ok(())
}

fn pfunc_check() -> Check {
    let a = dv("2,2,1");
    let p: Vec<String> = (0..=4).map(|q| p_function(&a, q).to_string()).collect();
    let b: Vec<String> = (0..=4).map(|q| vanishing_bound(&a, q).to_string()).collect();
    if p.join(" ") != "0 2 6 14 ∞" || b.join(" ") != "0 1 4 11 ∞" {
        return Err(format!("{} / {}", p.join(" "), b.join(" ")));
    }
    for x in 1..=3u32 {
        for n in 1..=6u32 {
            let dims = DimVector::new(&vec![x; n as usize]).map_err(|e| e.to_string())?;
            for q in 0..=12u32 {
                if p_function(&dims, q as usize) != p_closed_equal(x, n, q) {
                    return Err(format!("closed form differs at a={x} n={n} q={q}"));
                }
            }
        }
    }
    if p_function(&dv("2,2,2"), 3) != ExtNat::Finite(12) {
        return Err("P(2,2,2;3) != 12".into());
    }
    Ok(())
}

fn straighten_check() -> Check {
    let ring = ArtinianRing::new(dv("1,1,1,1"));
    let m = Monomial::parse_in(ring.dims(), "0,0,0,1 0,1,0,1 1,1,0,1").map_err(|e| e.to_string())?;
    let nf = ring.straighten(&m).map_err(|e| e.to_string())?.to_string();
    if nf != "+1 · z[0,0,0,1]·z[0,0,1,1]·z[0,1,1,1]" {
        return Err(nf);
    }
    Ok(())
}

fn cube_range_check(tables: &BTreeMap<String, BettiTable>) -> Check {
    for (n, dims) in [(3i64, "1,1,1"), (4, "1,1,1,1")] {
        let t = tables.get(dims).ok_or_else(|| format!("no table for {dims}"))?;
        for (p, q, d) in t.cells() {
            let (p, q) = (p as i64, q as i64);
            let inside = q < n && (1 << (q + 1)) - 2 - q <= p && p <= (1 << n) - (1 << (n - q)) - q;
            if (d != 0) != inside {
                return Err(format!("n={n}: K_{p},{q} = {d}"));
            }
        }
    }
    Ok(())
}

fn witness_check() -> Check {
    let k = KoszulComplex::new(dv("2,2,1")).map_err(|e| e.to_string())?;
    for p in 1..=8 {
        let spec = CycleSpec::row_one(k.dims(), p).map_err(|e| e.to_string())?;
        if !verify_witness(&k, &spec).map_err(|e| e.to_string())?.certifies_nonzero() {
            return Err(format!("(2,2,1) p={p}, q=1"));
        }
    }
    let k = KoszulComplex::new(dv("1,1,1,1")).map_err(|e| e.to_string())?;
    for p in 6..=10 {
        let spec = CycleSpec::cube(4, 2, p).map_err(|e| e.to_string())?;
        if !verify_witness(&k, &spec).map_err(|e| e.to_string())?.certifies_nonzero() {
            return Err(format!("(1,1,1,1) p={p}, q=2"));
        }
    }
    Ok(())
}

fn bott_check() -> Check {
    for d in -10i64..=10 {
        let ok = match bwb_cohomology(d, &[0], 2).map_err(|e| e.to_string())? {
            BottResult::Singular => d == -1,
            BottResult::Regular { degree: 0, dominant } => schur_dim(&dominant, 2).ok() == Some((d + 1).into()),
            BottResult::Regular { degree: 1, dominant } => schur_dim(&dominant, 2).ok() == Some((-d - 1).into()),
            _ => false,
        };
        if !ok {
            return Err(format!("O({d}) on P^1"));
        }
    }
    let s = |l: &[i64], m| schur_dim(l, m).map_err(|e| e.to_string());
    if s(&[8, 1], 2)? != 8.into() || s(&[3, 3, 2], 3)? * s(&[3, 3, 2], 3)? * s(&[7, 1], 2)? != 63.into() {
        return Err("Schur dimensions".into());
    }
    Ok(())
}

fn report(out: &mut impl Write, name: &str, start: Instant, r: Check) -> std::io::Result<bool> {
    match r {
        Ok(()) => {
            writeln!(out, "PASS  {name} ({:.2?})", start.elapsed())?;
            Ok(true)
        }
        Err(msg) => {
            writeln!(out, "FAIL  {name}: {msg}")?;
            Ok(false)
        }
    }
}

pub fn run(out: &mut impl Write) -> std::io::Result<bool> {
    let mut ok = true;
    let mut tables = BTreeMap::new();
    for (dims, expected) in golden::TABLES {
        let start = Instant::now();
        let r = table_check(dims, expected, &mut tables);
        ok &= report(out, &format!("Betti table of Seg({dims})"), start, r)?;
        out.flush()?;
    }
    let start = Instant::now();
    ok &= report(out, "nonvanishing range on (1,1,1) and (1,1,1,1)", start, cube_range_check(&tables))?;
    let checks: [NamedCheck; 4] = [
        ("vanishing bound P(a;q)", pfunc_check),
        ("straightening worked example", straighten_check),
        ("witness cycles", witness_check),
        ("Borel-Weil-Bott and Schur dimensions", bott_check),
    ];
    for (name, f) in checks {
        let start = Instant::now();
        ok &= report(out, name, start, f())?;
    }
    Ok(ok)
}

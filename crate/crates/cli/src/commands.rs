use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::Args;
use mulgroup::arith::PlaceSet;
use mulgroup::certificate::{certify_p4, certify_t2, Check, CheckStatus, CurveInstance, Poly2, LAMBDA0_CONVENTION};
use mulgroup::gcdlab::{self, extremal_gcd_search, parse_rational, theorem2_scan, Constants, ScanSpec};
use mulgroup::lattice::{relation_lattice, subgroup_order};
use mulgroup::orbit::{default_beta, theorem1_scan, Collinearity};
use mulgroup::{BigRat, Error};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::instances;
use crate::table::{approx, Table};
use crate::CliError;

/// A table and the exit code to finish with.
pub struct Outcome {
    pub table: Table,
    pub code: u8,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Outcome {
        Outcome { table, code: 0 }
    }
}

fn need<T>(v: &Option<T>, flag: &str) -> Result<T, CliError>
where
    T: Clone,
{
    v.clone().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn rat_str(x: &BigRat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn small_ratio(s: &str) -> Result<Ratio<u64>, CliError> {
    let r = parse_rational(s)?;
    match (r.numer().to_u64(), r.denom().to_u64()) {
        (Some(n), Some(d)) => Ok(Ratio::new(n, d)),
        _ => Err(CliError::Usage(format!("{s} must be a positive rational with 64-bit parts"))),
    }
}

fn primes(list: &str) -> Result<PlaceSet, CliError> {
    let ps: Vec<u64> = list
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad prime {t:?}"))))
        .collect::<Result<_, _>>()?;
    Ok(PlaceSet::new(&ps)?)
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long = "K", default_value_t = 1)]
    k: u64,
    /// Defaults to 1/(147 K).
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, default_value_t = 2)]
    qmin: u64,
    #[arg(long)]
    qmax: Option<u64>,
}

pub fn orbit(a: &OrbitArgs) -> Result<Outcome, CliError> {
    let qmax = need(&a.qmax, "qmax")?;
    if a.k == 0 {
        return Err(CliError::Usage("--K must be positive".into()));
    }
    let beta = match &a.beta {
        Some(s) => small_ratio(s)?,
        None => default_beta(a.k),
    };
    let scan = theorem1_scan(a.p, a.q, a.k, beta, a.qmin, qmax)?;
    let mut t = Table::new(
        "mulgroup.orbit/1",
        &["Q", "beta", "K", "b_size", "return_size", "records", "collinear", "line_witness"],
    );
    for r in &scan.rows {
        let witness = match r.collinearity {
            Collinearity::Empty | Collinearity::NotCollinear => String::new(),
            Collinearity::Point((m, n)) => format!("({m},{n})"),
            Collinearity::Line { point: (m, n), direction: (dm, dn) } => format!("({m},{n})+t({dm},{dn})"),
        };
        t.push(vec![
            r.modulus.to_string(),
            format!("{}/{}", beta.numer(), beta.denom()),
            a.k.to_string(),
            r.b_size.to_string(),
            r.pairs.to_string(),
            r.records.to_string(),
            r.collinearity.is_collinear().to_string(),
            witness,
        ]);
    }
    t.foot("skipped", scan.skipped);
    t.foot("flagged", scan.flagged().len());
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    qmin: u64,
    #[arg(long)]
    qmax: Option<u64>,
}

pub fn lattice(a: &LatticeArgs) -> Result<Outcome, CliError> {
    let qmax = need(&a.qmax, "qmax")?;
    let qmin = a.qmin.max(2);
    let moduli: Vec<u64> = (qmin..=qmax).filter(|m| m % a.p != 0 && m % a.q != 0).collect();
    let skipped = (qmax + 1).saturating_sub(qmin) as usize - moduli.len();
    let rows = moduli
        .par_iter()
        .map(|&m| -> Result<(Vec<String>, bool), Error> {
            let r = relation_lattice(a.p, a.q, m)?;
            let ord = subgroup_order(a.p, a.q, m)?;
            let mins = r.minima();
            let [b1, b2] = r.lattice.basis();
            let mink = mins.minkowski_holds(&(r.det as i64));
            let bound = r.lambda1_lower_bound_check().is_some();
            let agree = ord == r.det && r.basis_is_valid();
            let ln = (m as f64).ln();
            let row = vec![
                m.to_string(),
                r.det.to_string(),
                format!("{} {}", b1[0], b1[1]),
                format!("{} {}", b2[0], b2[1]),
                mins.lambda1.to_string(),
                mins.lambda2.to_string(),
                format!("{} {}", mins.v1[0], mins.v1[1]),
                format!("{} {}", mins.v2[0], mins.v2[1]),
                mink.to_string(),
                bound.to_string(),
                approx(r.det as f64 / (ln * ln)),
                if agree { "agree".into() } else { format!("disagree({ord})") },
            ];
            Ok((row, mink && bound && agree))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(
        "mulgroup.lattice/1",
        &[
            "Q", "ord", "hnf_row1", "hnf_row2", "lambda1", "lambda2", "v1", "v2", "minkowski_ok",
            "lambda1_bound_ok", "ratio", "ord_vs_enum",
        ],
    );
    let mut bad = 0;
    for (row, ok) in rows {
        bad += usize::from(!ok);
        t.push(row);
    }
    t.foot("skipped", skipped);
    t.foot("violations", bad);
    if bad > 0 {
        eprintln!("mulgroup: {bad} lattice rows violate an invariant");
    }
    Ok(Outcome { table: t, code: if bad > 0 { 2 } else { 0 } })
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Finite primes of S, comma separated.
    #[arg(long, default_value = "2,3")]
    primes: String,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    hmax: Option<u64>,
    #[arg(long, default_value_t = 1)]
    amax: u64,
    /// The constant C of item (a); defaults to hmax.
    #[arg(long)]
    cthreshold: Option<u64>,
}

pub fn scan_t2(a: &ScanArgs) -> Result<Outcome, CliError> {
    let epsilon = parse_rational(&need(&a.epsilon, "epsilon")?)?;
    let hmax = need(&a.hmax, "hmax")?;
    let spec = ScanSpec {
        places: primes(&a.primes)?,
        epsilon,
        hmax,
        amax: a.amax,
        cthreshold: BigInt::from(a.cthreshold.unwrap_or(hmax)),
    };
    let scan = theorem2_scan(&spec)?;
    let mut t = Table::new(
        "mulgroup.scan-t2/1",
        &["a1", "b1", "a2", "b2", "s1", "t1", "s2", "t2", "H", "Qgcd", "verdict", "eps_actual"],
    );
    for row in &scan.rows {
        let mut cells: Vec<String> = row.inst.coeffs().iter().chain(row.inst.units().iter()).map(|x| x.to_string()).collect();
        cells.push(row.h.to_string());
        cells.push(row.qgcd.to_string());
        cells.push(row.verdict.to_string());
        cells.push(row.inst.eps_actual_display().map(approx).unwrap_or_default());
        t.push(cells);
    }
    let c = &scan.constants;
    t.foot("N", c.n);
    t.foot("alpha", rat_str(&c.alpha));
    t.foot("admissible", scan.admissible);
    t.foot("rows", scan.rows.len());
    for tag in ["a", "b", "c", "bound-violation"] {
        t.foot(format!("count_{tag}"), scan.counts.get(tag).copied().unwrap_or(0));
    }
    if let Some((q, h)) = &scan.max_eps {
        t.foot("max_eps", format!("log {q}/log {h}"));
    }
    let violations = scan.counts.get("bound-violation").copied().unwrap_or(0);
    Ok(Outcome { table: t, code: if violations > 0 { 2 } else { 0 } })
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    epsilon: Option<String>,
    /// Instance file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Certify the curve argument for this polynomial (`j1:j2:c;...`).
    #[arg(long)]
    poly: Option<String>,
}

fn check_row(line: usize, inst: &str, form: &str, c: &Check) -> Vec<String> {
    vec![
        line.to_string(),
        inst.to_string(),
        form.to_string(),
        c.name.clone(),
        c.status.to_string(),
        c.lhs.clone(),
        c.rhs.clone(),
        c.note.clone(),
    ]
}

pub fn certify(a: &CertifyArgs) -> Result<Outcome, CliError> {
    let constants = Constants::for_epsilon(&parse_rational(&need(&a.epsilon, "epsilon")?)?)?;
    let poly: Option<Poly2> = a.poly.as_deref().map(str::parse).transpose()?;
    let text = match &a.input {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let (lines, mut bad) = instances::parse(&text);
    let form = if poly.is_some() { "p4" } else { "t2" };

    let results: Vec<Result<Vec<Vec<String>>, (usize, Error)>> = lines
        .par_iter()
        .map(|l| {
            let label = l.inst.to_string();
            let checks = match &poly {
                None => certify_t2(&l.inst, &constants).map(|c| c.checks),
                Some(p) => CurveInstance::new(p.clone(), l.inst.clone(), constants.dim())
                    .and_then(|ci| certify_p4(&ci, &constants))
                    .map(|c| c.checks),
            };
            match checks {
                Ok(cs) => Ok(cs.iter().map(|c| check_row(l.number, &label, form, c)).collect()),
                Err(e @ (Error::DegenerateForm { .. } | Error::MultiplicativeDependence { .. })) => {
                    let c = Check {
                        name: "all".into(),
                        status: CheckStatus::Degenerate,
                        lhs: String::new(),
                        rhs: String::new(),
                        note: e.to_string(),
                    };
                    Ok(vec![check_row(l.number, &label, form, &c)])
                }
                Err(e) => Err((l.number, e)),
            }
        })
        .collect();

    let mut t = Table::new("mulgroup.certify/1", &["line", "instance", "form", "check", "status", "lhs", "rhs", "note"]);
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for r in results {
        match r {
            Ok(rows) => {
                for row in rows {
                    *tally.entry(row[4].clone()).or_insert(0) += 1;
                    t.push(row);
                }
            }
            Err((n, e @ (Error::Invariant(_) | Error::IncompleteFactorization { .. }))) => {
                return Err(CliError::Invariant(format!("line {n}: {e}")));
            }
            Err((n, e)) => bad.push((n, e.to_string())),
        }
    }
    bad.sort();
    for (n, msg) in &bad {
        eprintln!("mulgroup: line {n}: {msg}");
    }
    t.foot("instances", lines.len());
    t.foot("bad_lines", bad.len());
    for status in ["pass", "fail", "not-applicable", "degenerate"] {
        t.foot(status, tally.get(status).copied().unwrap_or(0));
    }
    t.foot("convention", LAMBDA0_CONVENTION);
    let code = if !bad.is_empty() { 3 } else if tally.contains_key("fail") { 2 } else { 0 };
    Ok(Outcome { table: t, code })
}

#[derive(Debug, Args)]
pub struct RecordsArgs {
    #[arg(long, default_value_t = 2)]
    a: u64,
    #[arg(long, default_value_t = 3)]
    b: u64,
    #[arg(long)]
    nmax: Option<u64>,
    /// Only rows that set a new record.
    #[arg(long)]
    records_only: bool,
}

pub fn records(a: &RecordsArgs) -> Result<Outcome, CliError> {
    let nmax = need(&a.nmax, "nmax")?;
    let rows = extremal_gcd_search(a.a, a.b, nmax)?;
    let mut t = Table::new("mulgroup.records/1", &["n", "g", "record", "statistic"]);
    for r in rows.iter().filter(|r| r.record || !a.records_only) {
        t.push(vec![r.n.to_string(), r.g.to_string(), r.record.to_string(), r.statistic.map(approx).unwrap_or_default()]);
    }
    t.foot("records", rows.iter().filter(|r| r.record).count());
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct BoxArgs {
    #[arg(long = "Q")]
    modulus: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    s: Option<i64>,
}

pub fn box_witness(a: &BoxArgs) -> Result<Outcome, CliError> {
    let (x, y) = gcdlab::box_witness(need(&a.modulus, "Q")?, need(&a.s, "s")?)?;
    let mut t = Table::new("mulgroup.box/1", &["a", "b"]);
    t.push(vec![x.to_string(), y.to_string()]);
    Ok(t.into())
}

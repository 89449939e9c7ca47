//! JSON, CSV and plain-text renderings of results.
//!
//! JSON keeps every float bit-exact. CSV writes 17 significant digits with
//! a '.' decimal point regardless of locale. The text table is the only
//! place where probabilities are clamped to `[0, 1]`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use trilat_core::{ConvexBody, HitDistribution, Shape, SimReport, TriangleLattice};

use crate::compare::Comparison;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl From<&TriangleLattice> for LatticeSpec {
    fn from(l: &TriangleLattice) -> Self {
        LatticeSpec { a: l.a(), b: l.b(), c: l.c() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    Needle { length: f64 },
    Rectangle { g: f64, h: f64 },
    Ellipse { g: f64, h: f64 },
    HalfDisc { r: f64 },
    Disc { r: f64 },
    /// Hull vertices relative to the centroid.
    Polygon { vertices: Vec<[f64; 2]> },
}

impl From<&ConvexBody> for ShapeSpec {
    fn from(b: &ConvexBody) -> Self {
        match b.shape() {
            Shape::Needle { length } => ShapeSpec::Needle { length: *length },
            Shape::Rectangle { g, h } => ShapeSpec::Rectangle { g: *g, h: *h },
            Shape::Ellipse { g, h } => ShapeSpec::Ellipse { g: *g, h: *h },
            Shape::HalfDisc { r } => ShapeSpec::HalfDisc { r: *r },
            Shape::Disc { r } => ShapeSpec::Disc { r: *r },
            Shape::Polygon { vertices } => ShapeSpec::Polygon { vertices: vertices.iter().map(|v| [v.x, v.y]).collect() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputeOutput {
    pub lattice: LatticeSpec,
    pub shape: ShapeSpec,
    pub tol: f64,
    pub distribution: HitDistribution,
    /// The fit condition failed and values were forced; they are
    /// extrapolated, not guaranteed.
    pub extrapolated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub lattice: LatticeSpec,
    pub shape: ShapeSpec,
    pub report: SimReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOutput {
    pub lattice: LatticeSpec,
    pub shape: ShapeSpec,
    pub tol: f64,
    pub analytic: HitDistribution,
    pub simulation: SimReport,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    /// Absent when the fit condition fails and evaluation was not forced.
    pub p: Option<[f64; 6]>,
    pub expectation: Option<f64>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub param: String,
    pub lattice: LatticeSpec,
    pub shape: ShapeSpec,
    pub rows: Vec<SweepRow>,
}

/// 17 significant digits, '.' decimal point.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub const SWEEP_HEADER: &str = "param,p1,p2,p3,p4,p5,p6,expectation,margin";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&fmt17(r.param));
        match r.p {
            Some(p) => p.iter().for_each(|x| {
                out.push(',');
                out.push_str(&fmt17(*x));
            }),
            None => out.push_str(",,,,,,"),
        }
        out.push(',');
        out.push_str(&r.expectation.map(fmt17).unwrap_or_default());
        out.push(',');
        out.push_str(&fmt17(r.margin));
        out.push('\n');
    }
    out
}

pub fn compute_csv(o: &ComputeOutput) -> String {
    let d = &o.distribution;
    let mut out = String::from("method,p1,p2,p3,p4,p5,p6,expectation,margin,extrapolated\n");
    out.push_str(d.method.as_str());
    for p in d.p {
        out.push(',');
        out.push_str(&fmt17(p));
    }
    let _ = writeln!(out, ",{},{},{}", fmt17(d.expectation), fmt17(d.condition_margin), o.extrapolated);
    out
}

pub fn simulate_csv(o: &SimulateOutput) -> String {
    let r = &o.report;
    let mut out = String::from("hits,count,p_hat,stderr,n,seed\n");
    for (i, c) in r.counts.iter().enumerate() {
        let _ = writeln!(out, "{},{},{},{},{},{}", i + 1, c, fmt17(r.p_hat[i]), fmt17(r.stderr[i]), r.n, r.seed);
    }
    out
}

pub fn compare_csv(o: &CompareOutput) -> String {
    let mut out = String::from("hits,analytic,simulated,stderr,z,checked,n,seed\n");
    for row in &o.comparison.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.hits,
            fmt17(row.analytic),
            fmt17(row.simulated),
            fmt17(row.stderr),
            fmt17(row.z),
            row.checked,
            o.simulation.n,
            o.simulation.seed
        );
    }
    out
}

pub fn compute_table(o: &ComputeOutput) -> String {
    let d = &o.distribution;
    let mut out = String::new();
    let _ = writeln!(out, "method      {}", d.method.as_str());
    let _ = writeln!(out, "margin      {:.12}", d.condition_margin);
    for (i, p) in d.clamped().iter().enumerate() {
        let _ = writeln!(out, "p({})        {:.12}", i + 1, p);
    }
    let _ = writeln!(out, "E[Z]        {:.12}", d.expectation);
    if o.extrapolated {
        out.push_str("note        extrapolated, not a theorem guarantee\n");
    }
    out
}

pub fn simulate_table(o: &SimulateOutput) -> String {
    let r = &o.report;
    let mut out = format!("n           {}\nseed        {}\n", r.n, r.seed);
    for (i, c) in r.counts.iter().enumerate() {
        let _ = writeln!(out, "p({})        {:.6} ± {:.6}  ({c})", i + 1, r.p_hat[i], r.stderr[i]);
    }
    let _ = writeln!(out, "mean        {:.6}\nelapsed     {:.2}s", r.mean_hits(), r.elapsed_seconds);
    out
}

pub fn compare_table(o: &CompareOutput) -> String {
    let mut out = format!(
        "method {}  n {}  seed {}\nhits  analytic        simulated       stderr      z\n",
        o.analytic.method.as_str(),
        o.simulation.n,
        o.simulation.seed
    );
    for r in &o.comparison.rows {
        let _ = writeln!(
            out,
            "{:<5} {:<15.10} {:<15.10} {:<11.3e} {:>7.3}{}",
            r.hits,
            r.analytic,
            r.simulated,
            r.stderr,
            r.z,
            if r.checked { "" } else { "  (not tested)" }
        );
    }
    let _ = writeln!(out, "{}", if o.comparison.passed { "PASS" } else { "FAIL" });
    out
}

pub fn sweep_table(o: &SweepOutput) -> String {
    sweep_csv(&o.rows)
}

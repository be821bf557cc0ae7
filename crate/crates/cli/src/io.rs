//! JSON and CSV formats.
//!
//! Complex numbers are `[re, im]` pairs. Reported reals are rounded to 12 significant digits
//! so that output is byte-stable across platforms whose last-ulp behavior differs.

use std::path::Path;

use bloch_core::constructive::ConstructiveResult;
use bloch_core::covering::{CoveringReport, MonodromyLoop, SheetTree};
use bloch_core::seminorm::SeminormEstimate;
use bloch_core::slit_disk::SlitDiskSolution;
use bloch_core::surface::SurfaceSolution;
use bloch_core::{BlaschkeProduct, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [sig(z.re), sig(z.im)]
}

fn pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|&z| pair(z)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductJson {
    #[serde(default = "unit_rotation")]
    pub rotation: [f64; 2],
    pub zeros: Vec<[f64; 2]>,
}

fn unit_rotation() -> [f64; 2] {
    [1.0, 0.0]
}

impl ProductJson {
    /// Full precision, so that a product written out reads back identically.
    pub fn from_product(b: &BlaschkeProduct) -> Self {
        let r = b.rotation();
        ProductJson { rotation: [r.re, r.im], zeros: b.zeros().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_product(&self) -> CliResult<BlaschkeProduct> {
        let zeros = self.zeros.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let rotation = Complex64::new(self.rotation[0], self.rotation[1]);
        BlaschkeProduct::new(zeros, rotation).map_err(CliError::Input)
    }
}

pub fn parse_product(text: &str) -> CliResult<BlaschkeProduct> {
    serde_json::from_str::<ProductJson>(text)?.to_product()
}

pub fn read_product(path: &Path) -> CliResult<BlaschkeProduct> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
    parse_product(&text)
}

pub fn product_json(b: &BlaschkeProduct) -> String {
    serde_json::to_string(&ProductJson::from_product(b)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormJson {
    pub value: f64,
    pub argmax: [f64; 2],
    pub starts_used: usize,
    pub refinement_iterations: usize,
}

impl From<&SeminormEstimate> for SeminormJson {
    fn from(e: &SeminormEstimate) -> Self {
        SeminormJson {
            value: sig(e.value),
            argmax: pair(e.argmax),
            starts_used: e.starts_used,
            refinement_iterations: e.refinement_iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitDiskJson {
    pub a: f64,
    pub s0: f64,
    pub x0: f64,
    pub max_radius: f64,
}

impl From<&SlitDiskSolution> for SlitDiskJson {
    fn from(s: &SlitDiskSolution) -> Self {
        SlitDiskJson { a: sig(s.a), s0: sig(s.s0), x0: sig(s.x0), max_radius: sig(s.max_radius) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub r0: f64,
    pub argmax_z: [f64; 2],
    pub quadrature_nodes: usize,
}

impl From<&SurfaceSolution> for SurfaceJson {
    fn from(s: &SurfaceSolution) -> Self {
        SurfaceJson {
            a: sig(s.a),
            c: sig(s.c),
            d: sig(s.d),
            r0: sig(s.r0),
            argmax_z: pair(s.argmax_z),
            quadrature_nodes: s.quadrature_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructiveJson {
    pub zeta: [f64; 2],
    pub delta: f64,
    pub d_param: f64,
    pub z0: [f64; 2],
    pub guaranteed_bound: f64,
    pub actual_value: f64,
}

impl From<&ConstructiveResult> for ConstructiveJson {
    fn from(r: &ConstructiveResult) -> Self {
        ConstructiveJson {
            zeta: pair(r.zeta),
            delta: sig(r.delta),
            d_param: sig(r.d_param),
            z0: pair(r.z0),
            guaranteed_bound: sig(r.guaranteed_bound),
            actual_value: sig(r.actual_value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopJson {
    pub critical_value: [f64; 2],
    pub loop_radius: f64,
    pub permutation: String,
}

impl From<&MonodromyLoop> for LoopJson {
    fn from(l: &MonodromyLoop) -> Self {
        LoopJson {
            critical_value: pair(l.critical_value),
            loop_radius: sig(l.loop_radius),
            permutation: l.permutation.cycle_notation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SheetTreeJson {
    /// `[sheet, sheet, loop]`, sheets numbered from 1 as in the cycle notation.
    pub edges: Vec<[usize; 3]>,
    pub distinguished_sheet: usize,
    pub longest_path: Vec<usize>,
}

impl From<&SheetTree> for SheetTreeJson {
    fn from(t: &SheetTree) -> Self {
        SheetTreeJson {
            edges: t.edges.iter().map(|&(i, j, k)| [i + 1, j + 1, k]).collect(),
            distinguished_sheet: t.distinguished_sheet + 1,
            longest_path: t.longest_path.iter().map(|s| s + 1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringJson {
    pub product: ProductJson,
    pub perturbed: bool,
    pub critical_points: Vec<[f64; 2]>,
    pub critical_values: Vec<[f64; 2]>,
    pub max_critical_modulus: f64,
    pub case_label: String,
    pub base_point: [f64; 2],
    pub base_fiber: Vec<[f64; 2]>,
    pub monodromy: Vec<LoopJson>,
    pub transitive: bool,
    pub sheet_tree: Option<SheetTreeJson>,
}

impl From<&CoveringReport> for CoveringJson {
    fn from(r: &CoveringReport) -> Self {
        CoveringJson {
            product: ProductJson::from_product(&r.product),
            perturbed: r.perturbed,
            critical_points: pairs(&r.critical_points),
            critical_values: pairs(&r.critical_values),
            max_critical_modulus: sig(r.max_critical_modulus),
            case_label: r.case_label.as_str().to_string(),
            base_point: pair(r.base_point),
            base_fiber: pairs(&r.base_fiber),
            monodromy: r.monodromy.iter().map(LoopJson::from).collect(),
            transitive: r.transitive,
            sheet_tree: r.sheet_tree.as_ref().map(SheetTreeJson::from),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Serializes `rows` as CSV with a header row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

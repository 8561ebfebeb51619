//! Serialized shapes. Each top-level report carries a `schema` tag; bump the suffix on any
//! incompatible change.

use semistable_core::field::Fp2;
use semistable_core::lattice::{CongruenceCell, CongruenceReport};
use semistable_core::llc::{GaloisRepDescriptor, Reduction, Region, SmoothRepDescriptor};
use semistable_core::tree::{OrientedEdge, VertexClass};
use semistable_core::{PadicScalar, Surd, Valuation};
use serde::Serialize;

use crate::parse::format_rational;

pub const REDUCE: &str = "semistable.reduce/1";
pub const SCAN: &str = "semistable.scan/1";
pub const HECKE: &str = "semistable.hecke-verify/1";
pub const LAB: &str = "semistable.lab/1";
pub const MAHLER: &str = "semistable.mahler/1";

/// `x + yθ ∈ F_{p^2}` as `[x, y]`.
pub type Fp2Json = [u64; 2];

pub fn fp2(x: &Fp2) -> Fp2Json {
    x.pair()
}

pub fn valuation(v: Valuation) -> String {
    v.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DescriptorJson {
    Irreducible { omega2_exp: u64, twist: Fp2Json },
    Reducible { summands: Vec<SummandJson> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandJson {
    pub omega_exp: u64,
    pub mu: Fp2Json,
}

impl From<&GaloisRepDescriptor> for DescriptorJson {
    fn from(g: &GaloisRepDescriptor) -> Self {
        match g {
            GaloisRepDescriptor::Irreducible { c, twist, .. } => DescriptorJson::Irreducible {
                omega2_exp: *c,
                twist: fp2(twist),
            },
            GaloisRepDescriptor::Reducible { summands, .. } => DescriptorJson::Reducible {
                summands: summands
                    .iter()
                    .map(|(a, mu)| SummandJson {
                        omega_exp: *a,
                        mu: fp2(mu),
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothJson {
    pub r: u32,
    pub lambda: Fp2Json,
    pub eta_omega_exp: u64,
    pub eta_mu: Fp2Json,
    pub semisimplified: bool,
}

impl From<&SmoothRepDescriptor> for SmoothJson {
    fn from(s: &SmoothRepDescriptor) -> Self {
        SmoothJson {
            r: s.r,
            lambda: fp2(&s.lambda),
            eta_omega_exp: s.eta_exp,
            eta_mu: fp2(&s.eta_unramified),
            semisimplified: s.semisimplified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionJson {
    pub kind: &'static str,
    pub index: u32,
}

impl From<Region> for RegionJson {
    fn from(r: Region) -> Self {
        match r {
            Region::Interval(i) => RegionJson { kind: "interval", index: i },
            Region::Point(i) => RegionJson { kind: "point", index: i },
        }
    }
}

/// `rational + sqrt_p √p`, both as rational literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurdJson {
    pub rational: String,
    pub sqrt_p: String,
}

impl From<&Surd> for SurdJson {
    fn from(s: &Surd) -> Self {
        SurdJson {
            rational: format_rational(&s.rational),
            sqrt_p: format_rational(&s.sqrt_coeff),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReduceReport {
    pub schema: &'static str,
    pub p: u64,
    pub k: u32,
    pub r: u32,
    #[serde(rename = "L")]
    pub l: SurdJson,
    pub nu: String,
    pub region: RegionJson,
    pub descriptor: DescriptorJson,
    pub lambda: Option<Fp2Json>,
    pub trace: Option<u64>,
    pub det_check: bool,
    pub llc: Vec<SmoothJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub nu: String,
    #[serde(rename = "L")]
    pub l: SurdJson,
    pub region: RegionJson,
    pub descriptor: DescriptorJson,
    pub lambda: Option<Fp2Json>,
}

impl ScanRow {
    pub fn new(l: &Surd, red: &Reduction) -> Self {
        ScanRow {
            nu: valuation(red.nu),
            l: l.into(),
            region: red.region.into(),
            descriptor: (&red.descriptor).into(),
            lambda: red.lambda.as_ref().map(fp2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub schema: &'static str,
    pub p: u64,
    pub k: u32,
    pub rows: Vec<ScanRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationJson {
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
    /// First failing function, if any.
    pub counterexample: Option<Vec<EdgeValueJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeReport {
    pub schema: &'static str,
    pub p: u64,
    pub r: u32,
    pub trials: u64,
    pub seed: u64,
    pub pass: bool,
    pub relations: Vec<RelationJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexJson {
    pub n: i64,
    pub mu_digits: Vec<(i64, u64)>,
}

impl From<&VertexClass> for VertexJson {
    fn from(v: &VertexClass) -> Self {
        VertexJson {
            n: v.n,
            mu_digits: v.mu.iter().map(|(e, d)| (*e, *d)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeJson {
    pub source: VertexJson,
    pub target: VertexJson,
}

impl From<&OrientedEdge> for EdgeJson {
    fn from(e: &OrientedEdge) -> Self {
        EdgeJson {
            source: (&e.source).into(),
            target: (&e.target).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeValueJson {
    pub edge: EdgeJson,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellJson {
    pub a: u64,
    pub j: u32,
    pub pass: bool,
    pub margin_valuation: String,
}

impl From<&CongruenceCell> for CellJson {
    fn from(c: &CongruenceCell) -> Self {
        CellJson {
            a: c.a,
            j: c.j,
            pass: c.pass,
            margin_valuation: valuation(c.margin),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabReport {
    pub schema: &'static str,
    pub p: u64,
    pub r: u32,
    pub n: u32,
    pub x: String,
    pub precision: u32,
    pub pass: bool,
    pub min_margin: String,
    pub cells: Vec<CellJson>,
}

impl LabReport {
    pub fn new(rep: &CongruenceReport, precision: u32) -> Self {
        let x = num_rational::Ratio::new(rep.twice_x, 2);
        LabReport {
            schema: LAB,
            p: rep.prime.get(),
            r: rep.r,
            n: rep.n,
            x: valuation(Valuation::Finite(x)),
            precision,
            pass: rep.all_pass(),
            min_margin: valuation(rep.min_margin()),
            cells: rep.cells.iter().map(CellJson::from).collect(),
        }
    }
}

/// A p-adic scalar `p^valuation · unit (mod p^precision)`; zero has `valuation = "inf"`
/// and null unit and precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarJson {
    pub valuation: String,
    pub unit: Option<String>,
    pub precision: Option<u32>,
}

impl From<&PadicScalar> for ScalarJson {
    fn from(x: &PadicScalar) -> Self {
        ScalarJson {
            valuation: valuation(x.valuation()),
            unit: x.unit().map(|u| u.to_string()),
            precision: x.precision(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MahlerReport {
    pub schema: &'static str,
    pub p: u64,
    pub precision: u32,
    pub mahler: Vec<ScalarJson>,
    pub wavelet: Vec<ScalarJson>,
    pub c0_valuation: String,
}

//! Named algebras and Hermitian structures with their expected properties.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::constructions::{g10_nonsplit_pair, g2n_family, g2n_split_pair, s1, s2, s3, s4, s5, s6, s7};
use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::hermitian::{is_generalized_kahler, ComplexStructure, HermitianData, Metric, PropertyReport};
use crate::liealg::{verify_nilradical, LieAlgebra};
use crate::linalg::{Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Provenance {
    Paper,
    Trivial,
    Derived,
}

#[derive(Clone, Debug)]
pub struct Structure {
    pub label: String,
    pub j: ComplexStructure,
    pub g: Metric,
}

#[derive(Clone, Debug)]
pub struct GkPair {
    /// Indices into the entry's structures; both share the metric of the first.
    pub plus: usize,
    pub minus: usize,
}

/// An expected value keyed like `"I+.skt"`, `"unimodular"`, `"nilradical"`
/// or `"gk:I+/I-"`.
#[derive(Clone, Debug)]
pub struct Expectation {
    pub key: String,
    pub value: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: LieAlgebra,
    /// Basis symbol used in structure equations (`e` or `f`).
    pub basis_letter: char,
    pub params: BTreeMap<String, Scalar>,
    pub structures: Vec<Structure>,
    pub gk: Vec<GkPair>,
    pub nilradical: Option<Subspace>,
    pub expected: Vec<Expectation>,
}

const NAMES: [&str; 16] = [
    "flat_torus",
    "g2n_3",
    "g2n_4",
    "g2n_5",
    "g5_35_R",
    "g8_b",
    "s1",
    "s2",
    "s3",
    "s3_remark",
    "s4",
    "s5",
    "s6",
    "s7",
    "s8",
    "tau30_x_tau30",
];

pub fn catalog_list() -> Vec<&'static str> {
    NAMES.to_vec()
}

fn default_params(name: &str) -> Option<Vec<(&'static str, Scalar)>> {
    let one = Scalar::one;
    Some(match name {
        "flat_torus" | "g5_35_R" | "s3_remark" | "s8" | "tau30_x_tau30" => vec![],
        "g2n_3" | "g2n_4" | "g2n_5" => vec![("b", one()), ("c", one()), ("cp", one())],
        "g8_b" => vec![("b", one())],
        "s1" | "s3" => vec![("a", one()), ("delta", one())],
        "s2" | "s4" => vec![("a", one())],
        "s5" => vec![("a", one()), ("delta", Scalar::from_frac(1, 2))],
        "s6" => vec![("a", one()), ("b", one()), ("delta", one())],
        "s7" => vec![("a", one()), ("b", one())],
        _ => return None,
    })
}

fn differentials(n: usize, des: &[&[(i64, usize, usize)]]) -> Vec<KForm> {
    des.iter()
        .map(|t| {
            let mut f = KForm::zero(2, n);
            for &(c, i, j) in t.iter() {
                f.add_term(vec![i - 1, j - 1], Scalar::from_int(c));
            }
            f
        })
        .collect()
}

fn from_des(des: Vec<KForm>) -> LieAlgebra {
    LieAlgebra::from_differentials(&des)
        .and_then(LieAlgebra::validate)
        .expect("catalog algebras satisfy Jacobi")
}

fn pairs(n: usize, p: &[(usize, usize, i64)]) -> ComplexStructure {
    let zero_based: Vec<_> = p.iter().map(|&(i, j, s)| (i - 1, j - 1, s)).collect();
    ComplexStructure::from_pairs(n, &zero_based).expect("catalog J squares to -Id")
}

fn coord(n: usize, upto: usize) -> Subspace {
    Subspace::coordinate(n, &(0..upto).collect::<Vec<_>>())
}

fn entry(name: &str, algebra: LieAlgebra, letter: char, params: BTreeMap<String, Scalar>) -> CatalogEntry {
    let n = algebra.dim();
    let labels = (1..=n).map(|i| format!("{letter}{i}")).collect();
    CatalogEntry {
        name: name.to_string(),
        algebra: algebra.with_labels(labels),
        basis_letter: letter,
        params,
        structures: Vec::new(),
        gk: Vec::new(),
        nilradical: None,
        expected: Vec::new(),
    }
}

impl CatalogEntry {
    fn structure(mut self, label: &str, j: ComplexStructure) -> Self {
        let n = self.algebra.dim();
        self.structures.push(Structure {
            label: label.to_string(),
            j,
            g: Metric::identity(n),
        });
        self
    }

    fn gk_pair(mut self, plus: usize, minus: usize) -> Self {
        self.gk.push(GkPair { plus, minus });
        self
    }

    fn nilradical(mut self, h: Subspace) -> Self {
        self.nilradical = Some(h);
        self
    }

    fn expect(mut self, key: &str, value: impl ToString, provenance: Provenance) -> Self {
        self.expected.push(Expectation {
            key: key.to_string(),
            value: value.to_string(),
            provenance,
        });
        self
    }

    /// Hermitian data of the structure with the given label.
    pub fn hermitian(&self, label: &str) -> Option<HermitianData> {
        let s = self.structures.iter().find(|s| s.label == label)?;
        HermitianData::new(self.algebra.clone(), s.j.clone(), s.g.clone()).ok()
    }

    pub fn gk_key(&self, pair: &GkPair) -> String {
        format!(
            "gk:{}/{}",
            self.structures[pair.plus].label, self.structures[pair.minus].label
        )
    }
}

fn from_hermitian(name: &str, h: HermitianData, params: BTreeMap<String, Scalar>) -> CatalogEntry {
    entry(name, h.algebra().clone(), 'f', params).structure("J", h.complex_structure().clone())
}

/// Catalog entry with default parameters.
pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    catalog_entry_with(name, &BTreeMap::new())
}

/// Catalog entry with parameter overrides.
pub fn catalog_entry_with(name: &str, overrides: &BTreeMap<String, Scalar>) -> Result<CatalogEntry> {
    use Provenance::*;
    let defaults = default_params(name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown catalog entry {name:?}")))?;
    let mut params: BTreeMap<String, Scalar> =
        defaults.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    for (k, v) in overrides {
        match params.get_mut(k) {
            Some(slot) => *slot = v.clone(),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "entry {name:?} has no parameter {k:?}"
                )))
            }
        }
    }
    let p = |k: &str| params[k].clone();
    let e = match name {
        "flat_torus" => entry(name, LieAlgebra::abelian(6), 'e', params.clone())
            .structure("J", pairs(6, &[(1, 2, 1), (3, 4, 1), (5, 6, 1)]))
            .expect("J.kahler", true, Trivial)
            .expect("J.skt", true, Trivial)
            .expect("J.balanced", true, Trivial)
            .expect("unimodular", true, Trivial),
        "tau30_x_tau30" => {
            let alg = from_des(differentials(
                6,
                &[&[(-1, 2, 5)], &[(1, 1, 5)], &[(-1, 4, 6)], &[(1, 3, 6)], &[], &[]],
            ));
            let j = pairs(6, &[(1, 2, 1), (3, 4, 1), (5, 6, 1)]);
            entry(name, alg, 'f', params.clone())
                .structure("J", j.clone())
                .structure("-J", j.negate())
                .gk_pair(0, 1)
                .nilradical(coord(6, 4))
                .expect("J.skt", true, Paper)
                .expect("J.kahler", true, Derived)
                .expect("unimodular", true, Paper)
                .expect("gk:J/-J", "GK_SPLIT", Paper)
                .expect("nilradical", "IS_NILRADICAL", Derived)
        }
        "g5_35_R" => {
            let alg = from_des(differentials(
                6,
                &[&[(2, 1, 5)], &[(-1, 2, 5), (-1, 3, 6)], &[(-1, 3, 5), (1, 2, 6)], &[], &[], &[]],
            ));
            entry(name, alg, 'f', params.clone())
                .structure("J+", pairs(6, &[(1, 5, 1), (2, 3, 1), (4, 6, 1)]))
                .structure("J-", pairs(6, &[(1, 5, 1), (2, 3, -1), (4, 6, 1)]))
                .gk_pair(0, 1)
                .nilradical(coord(6, 4))
                .expect("J+.skt", true, Paper)
                .expect("J+.kahler", false, Derived)
                .expect("J-.skt", true, Paper)
                .expect("unimodular", true, Paper)
                .expect("gk:J+/J-", "GK_SPLIT", Paper)
                .expect("nilradical", "IS_NILRADICAL", Derived)
        }
        "s3_remark" => {
            let mut des = differentials(
                8,
                &[&[(1, 2, 3), (1, 1, 7)], &[], &[], &[(-1, 4, 8)], &[(-1, 6, 7)], &[(1, 5, 7)], &[], &[]],
            );
            let half = Scalar::from_frac(1, 2);
            for (k, (i, j)) in [(1, (2, 7)), (2, (3, 7)), (4, (5, 8)), (5, (6, 8))] {
                des[k].add_term(vec![i - 1, j - 1], half.clone());
            }
            entry(name, from_des(des), 'e', params.clone())
                .structure("I+", pairs(8, &[(1, 7, 1), (2, 3, 1), (5, 6, 1), (4, 8, 1)]))
                .structure("I-", pairs(8, &[(1, 7, 1), (2, 3, 1), (5, 6, -1), (4, 8, 1)]))
                .gk_pair(0, 1)
                .nilradical(coord(8, 6))
                .expect("unimodular", false, Paper)
                .expect("gk:I+/I-", "GK_SPLIT", Paper)
                .expect("I+.skt", true, Paper)
                .expect("nilradical", "IS_NILRADICAL", Paper)
        }
        "g8_b" => {
            let b = p("b");
            if b.is_zero() {
                return Err(Error::ZeroParameter("b"));
            }
            let e = |i: usize| Vector::basis(8, i - 1);
            let alg = LieAlgebra::from_brackets(
                8,
                &[
                    ((0, 6), e(2).scale(&b)),
                    ((1, 6), e(1).scale(&-b.clone())),
                    ((2, 7), e(4).scale(&b)),
                    ((3, 7), e(3).scale(&-b.clone())),
                    ((6, 7), &e(5) + &e(6)),
                ],
            )?
            .validate()?;
            entry(name, alg, 'e', params.clone())
                .structure("J", pairs(8, &[(1, 2, 1), (3, 4, 1), (5, 6, 1), (7, 8, 1)]))
                .nilradical(coord(8, 6))
                .expect("J.skt", true, Paper)
                .expect("J.chern_ricci_flat", true, Paper)
                .expect("J.kahler", false, Derived)
                .expect("nilradical", "IS_NILRADICAL", Derived)
        }
        "s1" | "s2" | "s3" | "s4" | "s5" | "s6" | "s7" => {
            let h = match name {
                "s1" => s1(&p("a"), &p("delta")),
                "s2" => s2(&p("a")),
                "s3" => s3(&p("a"), &p("delta")),
                "s4" => s4(&p("a")),
                "s5" => s5(&p("a"), &p("delta")),
                "s6" => s6(&p("a"), &p("b"), &p("delta")),
                _ => s7(&p("a"), &p("b")),
            }?;
            let mut e = from_hermitian(name, h, params.clone()).expect("J.skt", true, Paper);
            if matches!(name, "s6" | "s7") {
                e = e.nilradical(coord(8, 6)).expect("nilradical", "IS_NILRADICAL", Paper);
            } else if !p("a").is_zero() {
                let h = Subspace::coordinate(8, &[0, 1, 2, 3, 4, 5, 7]);
                e = e.nilradical(h).expect("nilradical", "IS_NILRADICAL", Derived);
            }
            e
        }
        "s8" => {
            let alg = from_des(differentials(
                8,
                &[
                    &[(1, 2, 3)],
                    &[(1, 2, 7)],
                    &[(-1, 3, 7)],
                    &[(1, 5, 7), (1, 4, 8)],
                    &[(-1, 4, 7), (1, 5, 8)],
                    &[(-2, 6, 8)],
                    &[],
                    &[],
                ],
            ));
            entry(name, alg, 'e', params.clone())
                .structure("J", pairs(8, &[(1, 2, 1), (3, 7, 1), (4, 5, 1), (6, 8, 1)]))
                .nilradical(coord(8, 6))
                .expect("J.skt", true, Paper)
                .expect("J.balanced", false, Paper)
                .expect("J.chern_ricci_flat", false, Paper)
                .expect("unimodular", true, Derived)
                .expect("nilradical", "IS_NILRADICAL", Paper)
        }
        _ => {
            let n: usize = name.trim_start_matches("g2n_").parse().expect("listed name");
            let alg = g2n_family(n, &p("b"), &p("c"), &p("cp"))?;
            let (ip, im) = g2n_split_pair(n)?;
            let mut e = entry(name, alg, 'e', params.clone())
                .structure("I+", ip)
                .structure("I-", im)
                .gk_pair(0, 1)
                .nilradical(coord(2 * n, 2 * n - 2))
                .expect("gk:I+/I-", "GK_SPLIT", Paper)
                .expect("I+.skt", true, Paper)
                .expect("unimodular", true, Derived)
                .expect("nilradical", "IS_NILRADICAL", Paper);
            if n == 5 {
                let (np, nm) = g10_nonsplit_pair()?;
                e = e
                    .structure("N+", np)
                    .structure("N-", nm)
                    .gk_pair(2, 3)
                    .expect("gk:N+/N-", "GK_NONSPLIT", Paper);
            }
            e
        }
    };
    Ok(e)
}

#[derive(Clone, Debug, Serialize)]
pub struct NilradicalReport {
    pub dim: usize,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub label: String,
    #[serde(flatten)]
    pub report: PropertyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct GkReport {
    pub labels: [String; 2],
    pub verdict: String,
}

/// Report in the JSON layout emitted by the command line tool.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub name: String,
    pub dimension: usize,
    pub jacobi: bool,
    pub unimodular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilradical: Option<NilradicalReport>,
    pub structures: Vec<StructureReport>,
    pub gk: Vec<GkReport>,
}

impl AlgebraReport {
    /// Computed value for an expectation key.
    pub fn lookup(&self, key: &str) -> Option<String> {
        match key {
            "unimodular" => return Some(self.unimodular.to_string()),
            "jacobi" => return Some(self.jacobi.to_string()),
            "nilradical" => return self.nilradical.as_ref().map(|n| n.verdict.clone()),
            _ => {}
        }
        if let Some(rest) = key.strip_prefix("gk:") {
            let (a, b) = rest.split_once('/')?;
            return self
                .gk
                .iter()
                .find(|g| g.labels[0] == a && g.labels[1] == b)
                .map(|g| g.verdict.clone());
        }
        let (label, flag) = key.rsplit_once('.')?;
        let s = self.structures.iter().find(|s| s.label == label)?;
        s.report.flag(flag).map(|b| b.to_string())
    }
}

/// Builds the report for an algebra with optional structures, GK pairs and
/// nilradical candidate.
pub fn build_report(
    name: &str,
    alg: &LieAlgebra,
    structures_in: &[Structure],
    gk: &[GkPair],
    nilradical: Option<&Subspace>,
) -> Result<AlgebraReport> {
    let jacobi = alg.jacobi_check().is_none();
    let nil = nilradical.map(|h| NilradicalReport {
            dim: h.dim(),
            verdict: match verify_nilradical(alg, h) {
                Ok(v) => v.to_string(),
                Err(e) => format!("ERROR: {e}"),
            },
        });
    let structures = structures_in
        .iter()
        .map(|s| {
            Ok(StructureReport {
                label: s.label.clone(),
                report: PropertyReport::compute(alg, &s.j, &s.g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gk = gk
        .iter()
        .map(|pair| {
            let (p, m) = (&structures_in[pair.plus], &structures_in[pair.minus]);
            let verdict = is_generalized_kahler(alg, p.j.matrix(), m.j.matrix(), &p.g);
            GkReport {
                labels: [p.label.clone(), m.label.clone()],
                verdict: verdict.code().to_string(),
            }
        })
        .collect();
    Ok(AlgebraReport {
        name: name.to_string(),
        dimension: alg.dim(),
        jacobi,
        unimodular: alg.is_unimodular(),
        nilradical: nil,
        structures,
        gk,
    })
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub report: AlgebraReport,
    pub mismatches: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Computes the report of an entry and compares it with the expectations.
pub fn catalog_check(entry: &CatalogEntry) -> Result<CheckResult> {
    let report = build_report(
        &entry.name,
        &entry.algebra,
        &entry.structures,
        &entry.gk,
        entry.nilradical.as_ref(),
    )?;
    let mismatches = entry
        .expected
        .iter()
        .filter_map(|e| match report.lookup(&e.key) {
            Some(v) if v == e.value => None,
            Some(v) => Some(format!("{}: expected {}, got {}", e.key, e.value, v)),
            None => Some(format!("{}: not computed", e.key)),
        })
        .collect();
    Ok(CheckResult { report, mismatches })
}

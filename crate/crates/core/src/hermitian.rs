//! Complex structures, metrics and the Hermitian predicates built on them.
//!
//! Conventions: `ω(x, y) = g(Jx, y)`, Bismut torsion `c = dω(J·, J·, J·)`,
//! `d^c ω = −c`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{j_transform, wedge_power, KForm};
use crate::liealg::LieAlgebra;
use crate::linalg::{Endomorphism, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexStructure(Endomorphism);

impl ComplexStructure {
    pub fn new(j: Endomorphism) -> Result<Self> {
        if !j.is_square() {
            return Err(Error::DimensionMismatch {
                expected: j.rows(),
                found: j.cols(),
            });
        }
        let n = j.rows();
        if &j * &j != -&Matrix::identity(n) {
            return Err(Error::NotComplexStructure);
        }
        Ok(ComplexStructure(j))
    }

    /// `J e_i = s·e_j`, `J e_j = −s·e_i` for each `(i, j, s)` (0-based).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize, i64)]) -> Result<Self> {
        let mut m = Matrix::zeros(n, n);
        for &(i, j, s) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "basis index out of range in J pair ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            m[(j, i)] = Scalar::from_int(s);
            m[(i, j)] = Scalar::from_int(-s);
        }
        Self::new(m)
    }

    /// Standard structure `e_{2k−1} ↦ e_{2k}`.
    pub fn standard(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (0..n / 2).map(|k| (2 * k, 2 * k + 1, 1)).collect();
        Self::from_pairs(n, &pairs)
    }

    pub fn matrix(&self) -> &Endomorphism {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.0.apply(v)
    }

    pub fn negate(&self) -> Self {
        ComplexStructure(-&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Metric(Matrix);

impl Metric {
    pub fn new(g: Matrix) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::NotSymmetric);
        }
        if !g.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !g.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Metric(g))
    }

    pub fn identity(n: usize) -> Self {
        Metric(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn inner(&self, x: &Vector, y: &Vector) -> Scalar {
        x.dot(&self.0.apply(y))
    }

    pub fn is_compatible(&self, j: &ComplexStructure) -> bool {
        let jm = j.matrix();
        &(&jm.transpose() * &self.0) * jm == self.0
    }
}

/// Nonzero values `N(e_i, e_j)`, `i < j`.
pub fn nijenhuis(alg: &LieAlgebra, j: &ComplexStructure) -> Vec<((usize, usize), Vector)> {
    let n = alg.dim();
    let jm = j.matrix();
    let cols: Vec<Vector> = (0..n).map(|i| jm.column(i)).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let ea = Vector::basis(n, a);
            let eb = Vector::basis(n, b);
            let t1 = alg.bracket_unchecked(&cols[a], &cols[b]);
            let t2 = jm.apply(&alg.bracket_unchecked(&cols[a], &eb));
            let t3 = jm.apply(&alg.bracket_unchecked(&ea, &cols[b]));
            let t4 = alg.bracket_basis(a, b);
            let v = &(&(&t1 - &t2) - &t3) - &t4;
            if !v.is_zero() {
                out.push(((a, b), v));
            }
        }
    }
    out
}

pub fn is_integrable(alg: &LieAlgebra, j: &ComplexStructure) -> bool {
    nijenhuis(alg, j).is_empty()
}

/// `(L, J, g)` with `J` and `g` compatible.
#[derive(Clone, Debug)]
pub struct HermitianData {
    algebra: LieAlgebra,
    j: ComplexStructure,
    g: Metric,
    integrable: bool,
}

impl HermitianData {
    pub fn new(algebra: LieAlgebra, j: ComplexStructure, g: Metric) -> Result<Self> {
        algebra.require_validated()?;
        for d in [j.dim(), g.dim()] {
            if d != algebra.dim() {
                return Err(Error::DimensionMismatch {
                    expected: algebra.dim(),
                    found: d,
                });
            }
        }
        if !g.is_compatible(&j) {
            return Err(Error::Incompatible);
        }
        let integrable = is_integrable(&algebra, &j);
        Ok(HermitianData {
            algebra,
            j,
            g,
            integrable,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn complex_structure(&self) -> &ComplexStructure {
        &self.j
    }

    pub fn metric(&self) -> &Metric {
        &self.g
    }

    pub fn is_integrable(&self) -> bool {
        self.integrable
    }

    fn require_integrable(&self) -> Result<()> {
        if self.integrable {
            Ok(())
        } else {
            Err(Error::NotIntegrable)
        }
    }

    fn d(&self, a: &KForm) -> KForm {
        self.algebra.ce_differential(a).expect("dimensions agree")
    }
}

/// `ω = g(J·, ·)`.
pub fn fundamental_form(h: &HermitianData) -> KForm {
    let n = h.algebra.dim();
    let omega = &h.j.matrix().transpose() * h.g.matrix();
    let mut f = KForm::zero(2, n);
    for a in 0..n {
        for b in a + 1..n {
            let c = &omega[(a, b)];
            if !c.is_zero() {
                f.add_term(vec![a, b], c.clone());
            }
        }
    }
    f
}

/// `c = dω(J·, J·, J·)`.
pub fn bismut_torsion(h: &HermitianData) -> Result<KForm> {
    h.require_integrable()?;
    let dw = h.d(&fundamental_form(h));
    j_transform(h.j.matrix(), &dw)
}

/// `d^c ω = −c`.
pub fn dc_form(h: &HermitianData) -> Result<KForm> {
    Ok(-&bismut_torsion(h)?)
}

pub fn is_kahler(h: &HermitianData) -> Result<bool> {
    h.require_integrable()?;
    Ok(h.d(&fundamental_form(h)).is_zero())
}

pub fn is_skt(h: &HermitianData) -> Result<bool> {
    Ok(h.d(&bismut_torsion(h)?).is_zero())
}

/// `d(ω^{n−1})` for real dimension `2n`.
pub fn balanced_defect(h: &HermitianData) -> Result<KForm> {
    h.require_integrable()?;
    let m = h.algebra.dim() / 2;
    Ok(h.d(&wedge_power(&fundamental_form(h), m.saturating_sub(1))))
}

pub fn is_balanced(h: &HermitianData) -> Result<bool> {
    Ok(balanced_defect(h)?.is_zero())
}

/// `η^Ch(Y) = ½(tr(ad_Y ∘ J) − tr ad_{JY})`.
pub fn chern_lee(h: &HermitianData) -> Result<KForm> {
    h.require_integrable()?;
    let n = h.algebra.dim();
    let jm = h.j.matrix();
    let half = Scalar::from_frac(1, 2);
    let coords: Vec<Scalar> = (0..n)
        .map(|i| {
            let e = Vector::basis(n, i);
            let t1 = (&h.algebra.ad(&e) * jm).trace();
            let t2 = h.algebra.ad(&jm.apply(&e)).trace();
            &(&t1 - &t2) * &half
        })
        .collect();
    Ok(KForm::covector(&Vector(coords)))
}

/// `ρ^Ch = dη^Ch`.
pub fn chern_ricci(h: &HermitianData) -> Result<KForm> {
    Ok(h.d(&chern_lee(h)?))
}

/// `θ(X) = ½⟨Z, JX⟩` with `Z = Σ [e_i, Je_i]` over an orthonormal frame.
/// `Z` is computed as `Σ_{a,b} (g⁻¹)_{ab} [e_a, J e_b]`, which agrees with
/// the frame sum and stays inside the scalar field.
pub fn lee_form(h: &HermitianData) -> Result<KForm> {
    h.require_integrable()?;
    let n = h.algebra.dim();
    let ginv = h.g.matrix().inverse().expect("positive definite");
    let jm = h.j.matrix();
    let mut z = Vector::zeros(n);
    for a in 0..n {
        let ea = Vector::basis(n, a);
        for b in 0..n {
            let c = &ginv[(a, b)];
            if c.is_zero() {
                continue;
            }
            z.axpy(c, &h.algebra.bracket_unchecked(&ea, &jm.column(b)));
        }
    }
    let gz = h.g.matrix().apply(&z);
    let half = Scalar::from_frac(1, 2);
    let coords: Vec<Scalar> = (0..n)
        .map(|k| &gz.dot(&jm.column(k)) * &half)
        .collect();
    Ok(KForm::covector(&Vector(coords)))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GkVerdict {
    Split,
    NonSplit,
    NotGk(String),
}

impl GkVerdict {
    pub fn code(&self) -> &'static str {
        match self {
            GkVerdict::Split => "GK_SPLIT",
            GkVerdict::NonSplit => "GK_NONSPLIT",
            GkVerdict::NotGk(_) => "NOT_GK",
        }
    }

    pub fn is_gk(&self) -> bool {
        !matches!(self, GkVerdict::NotGk(_))
    }
}

impl std::fmt::Display for GkVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GkVerdict::NotGk(r) => write!(f, "NOT_GK({r})"),
            _ => f.write_str(self.code()),
        }
    }
}

/// Bi-Hermitian test: both structures integrable and `g`-compatible,
/// `c₊ = −c₋`, `dc₊ = 0`; split when `[J₊, J₋] = 0`.
pub fn is_generalized_kahler(
    alg: &LieAlgebra,
    jp: &Matrix,
    jm: &Matrix,
    g: &Metric,
) -> GkVerdict {
    let mut torsions = Vec::new();
    for (name, m) in [("J+", jp), ("J-", jm)] {
        let j = match ComplexStructure::new(m.clone()) {
            Ok(j) => j,
            Err(_) => return GkVerdict::NotGk(format!("{name} does not square to -Id")),
        };
        let h = match HermitianData::new(alg.clone(), j, g.clone()) {
            Ok(h) => h,
            Err(Error::Incompatible) => {
                return GkVerdict::NotGk(format!("{name} is not compatible with g"))
            }
            Err(e) => return GkVerdict::NotGk(e.to_string()),
        };
        match bismut_torsion(&h) {
            Ok(c) => torsions.push(c),
            Err(_) => return GkVerdict::NotGk(format!("{name} is not integrable")),
        }
    }
    if torsions[0] != -&torsions[1] {
        return GkVerdict::NotGk("c+ != -c-".into());
    }
    if !alg.ce_differential(&torsions[0]).expect("dims").is_zero() {
        return GkVerdict::NotGk("dc+ != 0".into());
    }
    if jp.commutator(jm).is_zero() {
        GkVerdict::Split
    } else {
        GkVerdict::NonSplit
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HjDecomposition {
    pub invariant: bool,
    pub h_j: Subspace,
    pub hj_is_ideal: bool,
}

/// `h_J = h ∩ Jh`.
pub fn hj_decomposition(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    h: &Subspace,
) -> Result<HjDecomposition> {
    if h.codim() % 2 == 1 {
        return Err(Error::OddCodimension(h.codim()));
    }
    let jh = h.image(j.matrix());
    let h_j = h.intersection(&jh);
    Ok(HjDecomposition {
        invariant: jh == *h,
        hj_is_ideal: alg.is_ideal(&h_j),
        h_j,
    })
}

fn require_invariant_codim2(j: &ComplexStructure, h: &Subspace) -> Result<()> {
    if h.codim() != 2 {
        return Err(Error::NotCodim2(h.codim()));
    }
    if h.image(j.matrix()) != *h {
        return Err(Error::NotInvariant);
    }
    Ok(())
}

/// `[J_h, A]J_h + [J_h, B]` in the echelon basis of `h`, where `A = ad_u|_h`,
/// `B = ad_{Ju}|_h` for the first standard basis vector `u ∉ h`.  Vanishes
/// iff `N(u, ·)` vanishes on `h`, independently of the choice of `u`.
pub fn integrability_defect(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    h: &Subspace,
) -> Result<Endomorphism> {
    require_invariant_codim2(j, h)?;
    if !alg.is_ideal(h) {
        return Err(Error::NotIdeal);
    }
    let u = h.coordinate_complement().remove(0);
    let ju = j.apply(&u);
    let a = h.restrict(&alg.ad(&u)).expect("ideal");
    let b = h.restrict(&alg.ad(&ju)).expect("ideal");
    let jh = h.restrict(j.matrix()).expect("invariant");
    Ok(&(&jh.commutator(&a) * &jh) + &jh.commutator(&b))
}

struct Frame {
    u: Vector,
    ju: Vector,
    a: Matrix,
    b: Matrix,
}

fn orthogonal_frame(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    g: &Metric,
    h: &Subspace,
) -> Result<Frame> {
    require_invariant_codim2(j, h)?;
    if !alg.is_ideal(h) {
        return Err(Error::NotIdeal);
    }
    let perp = h.orthogonal_complement(g.matrix());
    let u = perp.basis()[0].clone();
    let ju = j.apply(&u);
    Ok(Frame {
        a: alg.ad(&u),
        b: alg.ad(&ju),
        u,
        ju,
    })
}

/// `A, B ∈ so(h)` and `[A, J_h] = [B, J_h] = 0` for `U ⊥ h`.
pub fn abelian_skt_conditions(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    g: &Metric,
    h: &Subspace,
) -> Result<bool> {
    let f = orthogonal_frame(alg, j, g, h)?;
    let jh = h.restrict(j.matrix()).expect("invariant");
    let gram = Matrix::from_fn(h.dim(), h.dim(), |r, c| {
        g.inner(&h.basis()[r], &h.basis()[c])
    });
    let ok = |m: &Matrix| {
        let m = h.restrict(m).expect("ideal");
        (&(&m.transpose() * &gram) + &(&gram * &m)).is_zero() && m.commutator(&jh).is_zero()
    };
    Ok(ok(&f.a) && ok(&f.b))
}

/// For each basis vector `Z` of the centre of `h`:
/// `‖AJZ‖² + ‖BJZ‖² + ‖AZ‖² + ‖BZ‖² − ⟨AJAJZ, Z⟩ − ⟨JAJAZ, Z⟩ − ⟨BJBJZ, Z⟩ − ⟨JBJBZ, Z⟩`
/// with `{U, JU}` an orthonormal basis of `h^⊥`.
pub fn center_obstruction(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    g: &Metric,
    h: &Subspace,
) -> Result<Vec<Scalar>> {
    let f = orthogonal_frame(alg, j, g, h)?;
    let jm = j.matrix();
    let norm_u = g.inner(&f.u, &f.u);
    let sq = |v: &Vector| g.inner(v, v);
    let center = alg.centralizer(h).intersection(h);
    Ok(center
        .basis()
        .iter()
        .map(|z| {
            let jz = jm.apply(z);
            let mut total = Scalar::zero();
            for m in [&f.a, &f.b] {
                total += &sq(&m.apply(&jz));
                total += &sq(&m.apply(z));
                let mjmjz = m.apply(&jm.apply(&m.apply(&jz)));
                let jmjmz = jm.apply(&m.apply(&jm.apply(&m.apply(z))));
                total -= &g.inner(&mjmjz, z);
                total -= &g.inner(&jmjmz, z);
            }
            &total / &norm_u
        })
        .collect())
}

/// Direct evaluation of `dc(JZ, Z, U, JU)` with `{U, JU}` orthonormal in `h^⊥`.
pub fn center_dc_components(hd: &HermitianData, h: &Subspace) -> Result<Vec<Scalar>> {
    let f = orthogonal_frame(&hd.algebra, &hd.j, &hd.g, h)?;
    let dc = hd.d(&bismut_torsion(hd)?);
    let norm_u = hd.g.inner(&f.u, &f.u);
    let center = hd.algebra.centralizer(h).intersection(h);
    center
        .basis()
        .iter()
        .map(|z| {
            let v = dc.evaluate(&[hd.j.apply(z), z.clone(), f.u.clone(), f.ju.clone()])?;
            Ok(&v / &norm_u)
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// First nonzero component (1-based indices) of the offending tensor.
    Component {
        component: Vec<usize>,
        coefficient: Scalar,
    },
    Reason { reason: String },
}

impl Witness {
    fn of_form(f: &KForm) -> Option<Witness> {
        f.first_nonzero().map(|(idx, c)| Witness::Component {
            component: idx.iter().map(|i| i + 1).collect(),
            coefficient: c.clone(),
        })
    }

    fn reason(s: &str) -> Witness {
        Witness::Reason {
            reason: s.to_string(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PropertyReport {
    pub integrable: bool,
    pub compatible: bool,
    pub kahler: bool,
    pub skt: bool,
    pub balanced: bool,
    pub chern_ricci_flat: bool,
    pub unimodular: bool,
    pub witnesses: BTreeMap<String, Witness>,
}

impl PropertyReport {
    pub fn compute(alg: &LieAlgebra, j: &ComplexStructure, g: &Metric) -> Result<Self> {
        alg.require_validated()?;
        let mut witnesses = BTreeMap::new();
        let nij = nijenhuis(alg, j);
        let integrable = nij.is_empty();
        if let Some(((a, b), v)) = nij.first() {
            let (k, c) = v.first_nonzero().expect("nonzero");
            witnesses.insert(
                "integrable".into(),
                Witness::Component {
                    component: vec![a + 1, b + 1, k + 1],
                    coefficient: c.clone(),
                },
            );
        }
        let compatible = g.is_compatible(j);
        if !compatible {
            let jm = j.matrix();
            let diff = &(&(&jm.transpose() * g.matrix()) * jm) - g.matrix();
            let (r, c, v) = diff.first_nonzero().expect("nonzero");
            witnesses.insert(
                "compatible".into(),
                Witness::Component {
                    component: vec![r + 1, c + 1],
                    coefficient: v.clone(),
                },
            );
        }
        let unimodular_witness = (0..alg.dim()).find_map(|i| {
            let t = alg.ad(&Vector::basis(alg.dim(), i)).trace();
            (!t.is_zero()).then(|| Witness::Component {
                component: vec![i + 1],
                coefficient: t,
            })
        });
        let unimodular = unimodular_witness.is_none();
        if let Some(w) = unimodular_witness {
            witnesses.insert("unimodular".into(), w);
        }
        let mut report = PropertyReport {
            integrable,
            compatible,
            kahler: false,
            skt: false,
            balanced: false,
            chern_ricci_flat: false,
            unimodular,
            witnesses,
        };
        let precondition = match (integrable, compatible) {
            (true, true) => None,
            (false, _) => Some("precondition: J is not integrable"),
            (true, false) => Some("precondition: J is not compatible with g"),
        };
        let flags = ["kahler", "skt", "balanced", "chern_ricci_flat"];
        if let Some(reason) = precondition {
            for f in flags {
                report.witnesses.insert(f.into(), Witness::reason(reason));
            }
            return Ok(report);
        }
        let h = HermitianData::new(alg.clone(), j.clone(), g.clone())?;
        let dw = h.d(&fundamental_form(&h));
        let dc = h.d(&bismut_torsion(&h)?);
        let bal = balanced_defect(&h)?;
        let rho = chern_ricci(&h)?;
        for (flag, tensor) in flags.into_iter().zip([&dw, &dc, &bal, &rho]) {
            let ok = tensor.is_zero();
            match flag {
                "kahler" => report.kahler = ok,
                "skt" => report.skt = ok,
                "balanced" => report.balanced = ok,
                _ => report.chern_ricci_flat = ok,
            }
            if let Some(w) = Witness::of_form(tensor) {
                report.witnesses.insert(flag.into(), w);
            }
        }
        Ok(report)
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        Some(match name {
            "integrable" => self.integrable,
            "compatible" => self.compatible,
            "kahler" => self.kahler,
            "skt" => self.skt,
            "balanced" => self.balanced,
            "chern_ricci_flat" => self.chern_ricci_flat,
            "unimodular" => self.unimodular,
            _ => return None,
        })
    }
}

pub const FLAG_NAMES: [&str; 7] = [
    "integrable",
    "compatible",
    "kahler",
    "skt",
    "balanced",
    "chern_ricci_flat",
    "unimodular",
];

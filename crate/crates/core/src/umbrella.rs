//! Builders for the umbrella algebras `UM(A)` and `UM(r,2s)`: generator
//! rosters, commutator relations, Hopf data, the congruence isomorphism, and
//! the JSON presentation file the CLI reads and writes.
//!
//! The roster is always `x0 < x1 < .. < xr < X1 < .. < Xd < y1 < .. < yr`
//! with weights 1 on the x and Lie generators and 2 on the y generators.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freealg::{
    format_scalar, parse_scalar, s_int, s_ratio, FreeAlgError, GenId, GeneratorSet, NcPoly,
    Scalar, Word,
};
use crate::hopf::TensorPoly;
use crate::liealg::{block_matrix, so_basis, so_dimension, LieData, LieError, QMatrix};
use crate::report::{Report, Target};
use crate::rewrite::{
    build_reduction_system, Presentation, PresentationMeta, ReductionSystem, RewriteError,
};

#[derive(Debug, Error)]
pub enum UmbrellaError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("congruence precondition violated: P A P^T != A'")]
    CongruencePrecondition,
    #[error("presentation file: {0}")]
    File(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
}

/// Layout of the umbrella generator roster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UmRoster {
    pub r: usize,
    pub d: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    X0,
    /// `x_i`, 1-based
    X(usize),
    /// Lie generator `X_j`, 1-based
    Lie(usize),
    /// `y_i`, 1-based
    Y(usize),
}

impl UmRoster {
    pub fn len(&self) -> usize {
        2 * self.r + 1 + self.d
    }

    /// Never empty: `x0` is always present.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x0(&self) -> GenId {
        0
    }

    pub fn x(&self, i: usize) -> GenId {
        debug_assert!((1..=self.r).contains(&i));
        i
    }

    pub fn lie(&self, j: usize) -> GenId {
        debug_assert!((1..=self.d).contains(&j));
        self.r + j
    }

    pub fn y(&self, i: usize) -> GenId {
        debug_assert!((1..=self.r).contains(&i));
        self.r + self.d + i
    }

    pub fn kind(&self, id: GenId) -> GenKind {
        if id == 0 {
            GenKind::X0
        } else if id <= self.r {
            GenKind::X(id)
        } else if id <= self.r + self.d {
            GenKind::Lie(id - self.r)
        } else {
            GenKind::Y(id - self.r - self.d)
        }
    }

    fn names(&self) -> Vec<(String, u64)> {
        let mut names = vec![("x0".to_string(), 1)];
        names.extend((1..=self.r).map(|i| (format!("x{i}"), 1)));
        names.extend((1..=self.d).map(|j| (format!("X{j}"), 1)));
        names.extend((1..=self.r).map(|i| (format!("y{i}"), 2)));
        names
    }
}

/// Full coproduct, counit and antipode of every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfData {
    pub delta: Vec<TensorPoly>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<NcPoly>,
}

impl HopfData {
    /// `z ⊗ 1 + 1 ⊗ z`.
    pub fn primitive_delta(gens: &GeneratorSet, id: GenId) -> TensorPoly {
        let mut t = TensorPoly::new(2);
        t.add_term(vec![gens.letter(id), Word::empty()], s_int(1));
        t.add_term(vec![Word::empty(), gens.letter(id)], s_int(1));
        t
    }

    pub fn primitive(gens: &GeneratorSet, id: GenId) -> (TensorPoly, Scalar, NcPoly) {
        let delta = Self::primitive_delta(gens, id);
        let antipode = NcPoly::from_term(gens.letter(id), s_int(-1));
        (delta, Scalar::from_integer(0.into()), antipode)
    }
}

/// A built umbrella algebra: presentation, Hopf data and the Lie-theoretic
/// data behind its roster.
pub struct UmAlgebra {
    pub pres: Presentation,
    pub hopf: HopfData,
    pub lie: LieData,
    pub roster: UmRoster,
}

impl UmAlgebra {
    pub fn new(a: &QMatrix) -> Result<UmAlgebra, UmbrellaError> {
        if !a.is_antisymmetric() {
            return Err(UmbrellaError::Lie(LieError::NotAntisymmetric));
        }
        let lie = so_basis(a)?;
        let r = a.nrows();
        let d = lie.dim();
        let roster = UmRoster { r, d };
        let gens = GeneratorSet::new(roster.names())?;

        let sc = crate::liealg::structure_constants(&lie)?;
        let mut f: BTreeMap<(GenId, GenId), NcPoly> = BTreeMap::new();
        let n = roster.len();
        for i in 0..n {
            for j in (i + 1)..n {
                f.insert((i, j), NcPoly::zero());
            }
        }
        // [x_i, x_j] = A_ij x0
        for i in 1..=r {
            for j in (i + 1)..=r {
                let c = a[(i - 1, j - 1)].clone();
                f.insert(
                    (roster.x(i), roster.x(j)),
                    NcPoly::from_term(gens.letter(roster.x0()), c),
                );
            }
        }
        // [y_i, y_j] = (1/3) A_ij x0^3
        for i in 1..=r {
            for j in (i + 1)..=r {
                let c = a[(i - 1, j - 1)].clone() * s_ratio(1, 3);
                f.insert(
                    (roster.y(i), roster.y(j)),
                    NcPoly::from_term(gens.word(vec![0, 0, 0]), c),
                );
            }
        }
        // [x_i, M] = sum_k M_ik x_k
        for i in 1..=r {
            for j in 1..=d {
                let m = &lie.basis[j - 1];
                let mut p = NcPoly::zero();
                for k in 1..=r {
                    p.add_term(gens.letter(roster.x(k)), m[(i - 1, k - 1)].clone());
                }
                f.insert((roster.x(i), roster.lie(j)), p);
            }
        }
        // [X_j, y_i] = -sum_k M_ik y_k   (the roster puts the Lie block first)
        for j in 1..=d {
            for i in 1..=r {
                let m = &lie.basis[j - 1];
                let mut p = NcPoly::zero();
                for k in 1..=r {
                    p.add_term(gens.letter(roster.y(k)), -m[(i - 1, k - 1)].clone());
                }
                f.insert((roster.lie(j), roster.y(i)), p);
            }
        }
        // [M, N] expressed in the solved basis
        for i in 1..=d {
            for j in (i + 1)..=d {
                let coords = sc.get(i - 1, j - 1).expect("pair in table");
                let mut p = NcPoly::zero();
                for (k, c) in coords.iter().enumerate() {
                    p.add_term(gens.letter(roster.lie(k + 1)), c.clone());
                }
                f.insert((roster.lie(i), roster.lie(j)), p);
            }
        }

        let meta = PresentationMeta {
            family: "um".to_string(),
            r: Some(r),
            s: Some(lie.rank_s),
            lambda: None,
            matrix: Some(a.clone()),
        };
        let pres = Presentation::new(gens.clone(), f, Some(meta))?;

        let mut delta = Vec::with_capacity(n);
        let mut counit = Vec::with_capacity(n);
        let mut antipode = Vec::with_capacity(n);
        for id in 0..n {
            match roster.kind(id) {
                GenKind::Y(i) => {
                    let mut t = HopfData::primitive_delta(&gens, id);
                    t.add_term(
                        vec![gens.letter(roster.x0()), gens.letter(roster.x(i))],
                        s_int(1),
                    );
                    t.add_term(
                        vec![gens.letter(roster.x(i)), gens.letter(roster.x0())],
                        s_int(-1),
                    );
                    delta.push(t);
                    counit.push(Scalar::from_integer(0.into()));
                    antipode.push(NcPoly::from_term(gens.letter(id), s_int(-1)));
                }
                _ => {
                    let (t, e, s) = HopfData::primitive(&gens, id);
                    delta.push(t);
                    counit.push(e);
                    antipode.push(s);
                }
            }
        }
        let hopf = HopfData { delta, counit, antipode };
        Ok(UmAlgebra { pres, hopf, lie, roster })
    }

    pub fn block(r: usize, s: usize) -> Result<UmAlgebra, UmbrellaError> {
        if 2 * s > r {
            return Err(UmbrellaError::BadParameters(format!(
                "need r >= 2s, got r={r}, s={s}"
            )));
        }
        UmAlgebra::new(&block_matrix(r, s))
    }
}

pub fn build_presentation(a: &QMatrix) -> Result<Presentation, UmbrellaError> {
    Ok(UmAlgebra::new(a)?.pres)
}

pub fn build_hopf_data(a: &QMatrix) -> Result<HopfData, UmbrellaError> {
    Ok(UmAlgebra::new(a)?.hopf)
}

/// `GKdim UM(r,2s) = (r-2s) r + 2 s^2 + s + 2r + 1`, which is also the size
/// of the generator roster.
pub fn gkdim(r: usize, s: usize) -> Result<u64, UmbrellaError> {
    if 2 * s > r {
        return Err(UmbrellaError::BadParameters(format!(
            "need r >= 2s, got r={r}, s={s}"
        )));
    }
    Ok((so_dimension(r, s) + 2 * r + 1) as u64)
}

/// Roster data recovered from a built presentation, for the verifiers that
/// need the Lie structure behind the generators.
pub struct UmContext {
    pub r: usize,
    pub s: usize,
    pub a: QMatrix,
    pub lie: LieData,
    pub roster: UmRoster,
}

pub fn um_context(pres: &Presentation) -> Result<UmContext, UmbrellaError> {
    let meta = pres
        .meta
        .as_ref()
        .filter(|m| m.family == "um")
        .ok_or_else(|| UmbrellaError::BadParameters("not an umbrella presentation".into()))?;
    let a = meta
        .matrix
        .clone()
        .ok_or_else(|| UmbrellaError::BadParameters("missing structure matrix".into()))?;
    let lie = so_basis(&a)?;
    let r = a.nrows();
    let roster = UmRoster { r, d: lie.dim() };
    if pres.gens().len() != roster.len() {
        return Err(UmbrellaError::BadParameters(
            "generator roster does not match the structure matrix".into(),
        ));
    }
    Ok(UmContext { r, s: lie.rank_s, a, lie, roster })
}

/// Trace of the weight-preserving part of the commutator action of a
/// generator on the generator symbols. Module generators (`x`, `y`) act via
/// `[z, g]`, matching the orientation of their defining relations; the Lie
/// block acts adjointly via `[g, z]`. For `x` and `y` generators this trace
/// is zero; for a Lie generator it recomputes `phi_eta` from the rewrite
/// system alone.
pub fn symbol_trace(rsys: &ReductionSystem, ctx: &UmContext, gen: GenId) -> Scalar {
    let gens = rsys.gens();
    let roster = &ctx.roster;
    let g = NcPoly::from_word(gens.letter(gen));
    let mut total = Scalar::from_integer(0.into());
    for z in 0..gens.len() {
        let zp = NcPoly::from_word(gens.letter(z));
        let bracket = match roster.kind(z) {
            GenKind::X0 | GenKind::X(_) | GenKind::Y(_) => zp.commutator(&g),
            GenKind::Lie(_) => g.commutator(&zp),
        };
        let nf = rsys.normal_form(&bracket);
        total += nf.coeff(&gens.letter(z));
    }
    total
}

/// Candidate isomorphism data between `UM(A)` and `UM(A')` for a congruence
/// `P A P^T = A'`, plus the mechanical verification that every relation maps
/// into the target ideal.
pub struct IsoMap {
    /// image of each source generator in the target algebra
    pub images: Vec<NcPoly>,
    pub source: UmAlgebra,
    pub target: UmAlgebra,
    pub report: Report,
}

/// Builds the substitution `x0 -> x0'`, `x_i -> sum_j Q_ji x_j'`,
/// `y_i -> sum_j Q_ji y_j'`, `M -> P M P^{-1}` with `Q = P^{-T}`, and checks
/// it maps every relation to zero in the target. For orthogonal `P` this is
/// the plain congruence rule `x_i -> sum_j P_ji x_j'`, `M -> P M P^T`.
pub fn iso_map(a: &QMatrix, a_target: &QMatrix, p: &QMatrix) -> Result<IsoMap, UmbrellaError> {
    if !a.is_antisymmetric() || !a_target.is_antisymmetric() {
        return Err(UmbrellaError::Lie(LieError::NotAntisymmetric));
    }
    let p_inv = p.inverse().map_err(|_| UmbrellaError::CongruencePrecondition)?;
    if p.mul(a).mul(&p.transpose()) != *a_target {
        return Err(UmbrellaError::CongruencePrecondition);
    }
    let start = Instant::now();
    let source = UmAlgebra::new(a)?;
    let target = UmAlgebra::new(a_target)?;
    let q = p_inv.transpose(); // Q = P^{-T}
    let r = source.roster.r;
    let tg = target.pres.gens();

    let mut images: Vec<NcPoly> = Vec::with_capacity(source.roster.len());
    images.push(NcPoly::from_word(tg.letter(target.roster.x0())));
    for i in 1..=r {
        let mut img = NcPoly::zero();
        for j in 1..=r {
            img.add_term(tg.letter(target.roster.x(j)), q[(j - 1, i - 1)].clone());
        }
        images.push(img);
    }
    for m in &source.lie.basis {
        let conj = p.mul(m).mul(&p_inv);
        let coords = target.lie.coords(&conj)?;
        let mut img = NcPoly::zero();
        for (k, c) in coords.iter().enumerate() {
            img.add_term(tg.letter(target.roster.lie(k + 1)), c.clone());
        }
        images.push(img);
    }
    for i in 1..=r {
        let mut img = NcPoly::zero();
        for j in 1..=r {
            img.add_term(tg.letter(target.roster.y(j)), q[(j - 1, i - 1)].clone());
        }
        images.push(img);
    }

    let target_rs = build_reduction_system(&target.pres)?;
    let mut report = Report::new("iso", Target::of(&target.pres));
    for (i, j) in source.pres.pairs() {
        let g = source.pres.relation(i, j);
        let image = g.substitute_hom(&images);
        let residue = target_rs.normal_form(&image);
        if !residue.is_zero() {
            report.fail(
                format!(
                    "relation ({},{})",
                    source.pres.gens().name(i),
                    source.pres.gens().name(j)
                ),
                Some(residue.display(tg)),
            );
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(IsoMap { images, source, target, report })
}

/// The three-generator fixture algebra: `[x,y] = y`, `[z,y] = 0`,
/// `[z,x] = -z + lambda y`, with `x, y` primitive and
/// `delta z = x (x) y - y (x) x`. Generator order `y < x < z` with weights
/// `1, 1, 2` keeps the reduction system weight-compatible.
pub fn build_wzz_example(lambda: &Scalar) -> (Presentation, HopfData) {
    let gens = GeneratorSet::new([("y", 1u64), ("x", 1), ("z", 2)]).unwrap();
    let (y, x, z) = (0usize, 1usize, 2usize);
    let mut f = BTreeMap::new();
    // [y, x] = -[x, y] = -y
    f.insert((y, x), NcPoly::from_term(gens.letter(y), s_int(-1)));
    // [y, z] = -[z, y] = 0
    f.insert((y, z), NcPoly::zero());
    // [x, z] = -[z, x] = z - lambda y
    let mut fxz = NcPoly::from_word(gens.letter(z));
    fxz.add_term(gens.letter(y), -lambda.clone());
    f.insert((x, z), fxz);
    let meta = PresentationMeta {
        family: "wzz".to_string(),
        r: None,
        s: None,
        lambda: Some(lambda.clone()),
        matrix: None,
    };
    let pres = Presentation::new(gens.clone(), f, Some(meta)).unwrap();

    let mut delta = Vec::new();
    let mut counit = Vec::new();
    let mut antipode = Vec::new();
    for id in [y, x] {
        let (t, e, s) = HopfData::primitive(&gens, id);
        delta.push(t);
        counit.push(e);
        antipode.push(s);
    }
    let mut dz = HopfData::primitive_delta(&gens, z);
    dz.add_term(vec![gens.letter(x), gens.letter(y)], s_int(1));
    dz.add_term(vec![gens.letter(y), gens.letter(x)], s_int(-1));
    delta.push(dz);
    counit.push(Scalar::from_integer(0.into()));
    // S(z) = y - z, forced by m(S (x) id) delta z = 0 in the quotient
    let mut sz = NcPoly::from_term(gens.letter(z), s_int(-1));
    sz.add_term(gens.letter(y), s_int(1));
    antipode.push(sz);

    (pres, HopfData { delta, counit, antipode })
}

// ---------------------------------------------------------------------------
// presentation files

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub generators: Vec<GenEntry>,
    pub relations: Vec<RelationEntry>,
    pub hopf: HopfSection,
    pub meta: MetaSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<VerifiedStamp>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenEntry {
    pub name: String,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub pair: [usize; 2],
    /// `f_ij` in polynomial literal syntax
    pub f: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfSection {
    /// generator name -> full coproduct terms
    pub delta: BTreeMap<String, Vec<TensorTermEntry>>,
    /// generator name -> antipode image in polynomial literal syntax
    pub antipode: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorTermEntry {
    /// rational coefficient
    pub c: String,
    /// left word literal ("" is the empty word)
    pub l: String,
    /// right word literal
    pub r: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaSection {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifiedStamp {
    pub algo: String,
    pub hash: String,
}

impl PresentationFile {
    pub fn from_parts(pres: &Presentation, hopf: &HopfData) -> PresentationFile {
        let gens = pres.gens();
        let generators = gens
            .iter()
            .map(|g| GenEntry { name: g.name.clone(), weight: g.weight })
            .collect();
        let relations = pres
            .pairs()
            .map(|(i, j)| RelationEntry { pair: [i, j], f: pres.f(i, j).display(gens) })
            .collect();
        let mut delta = BTreeMap::new();
        let mut antipode = BTreeMap::new();
        for id in 0..gens.len() {
            let name = gens.name(id).to_string();
            let terms = hopf.delta[id]
                .terms()
                .map(|(tuple, c)| TensorTermEntry {
                    c: format_scalar(c),
                    l: tuple[0].display(gens),
                    r: tuple[1].display(gens),
                })
                .collect();
            delta.insert(name.clone(), terms);
            antipode.insert(name, hopf.antipode[id].display(gens));
        }
        let meta = match &pres.meta {
            Some(m) => MetaSection {
                family: m.family.clone(),
                r: m.r,
                s: m.s,
                lambda: m.lambda.as_ref().map(format_scalar),
                a: m.matrix.as_ref().map(|a| a.to_rational_strings()),
            },
            None => MetaSection { family: "custom".into(), r: None, s: None, lambda: None, a: None },
        };
        PresentationFile {
            generators,
            relations,
            hopf: HopfSection { delta, antipode },
            meta,
            verified: None,
        }
    }

    pub fn into_parts(&self) -> Result<(Presentation, HopfData), UmbrellaError> {
        let gens = GeneratorSet::new(
            self.generators
                .iter()
                .map(|g| (g.name.clone(), g.weight)),
        )?;
        let n = gens.len();
        let mut f = BTreeMap::new();
        for rel in &self.relations {
            let [i, j] = rel.pair;
            if i >= j || j >= n {
                return Err(UmbrellaError::File(format!("bad relation pair ({i},{j})")));
            }
            f.insert((i, j), NcPoly::parse(&rel.f, &gens)?);
        }
        let meta = PresentationMeta {
            family: self.meta.family.clone(),
            r: self.meta.r,
            s: self.meta.s,
            lambda: match &self.meta.lambda {
                Some(text) => Some(parse_scalar(text)?),
                None => None,
            },
            matrix: match &self.meta.a {
                Some(rows) => Some(QMatrix::from_rational_strings(rows)?),
                None => None,
            },
        };
        let pres = Presentation::new(gens.clone(), f, Some(meta))?;

        let mut delta = Vec::with_capacity(n);
        let mut counit = Vec::with_capacity(n);
        let mut antipode = Vec::with_capacity(n);
        for id in 0..n {
            let name = gens.name(id);
            let terms = self
                .hopf
                .delta
                .get(name)
                .ok_or_else(|| UmbrellaError::File(format!("missing delta for `{name}`")))?;
            let mut t = TensorPoly::new(2);
            for entry in terms {
                let c = parse_scalar(&entry.c)?;
                let l = NcPoly::parse_word(&entry.l, &gens)?;
                let r = NcPoly::parse_word(&entry.r, &gens)?;
                t.add_term(vec![l, r], c);
            }
            delta.push(t);
            counit.push(Scalar::from_integer(0.into()));
            let s_text = self
                .hopf
                .antipode
                .get(name)
                .ok_or_else(|| UmbrellaError::File(format!("missing antipode for `{name}`")))?;
            antipode.push(NcPoly::parse(s_text, &gens)?);
        }
        Ok((pres, HopfData { delta, counit, antipode }))
    }

    /// Canonical bytes for content hashing: the JSON serialization with the
    /// `verified` stamp stripped.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut unstamped = self.clone();
        unstamped.verified = None;
        serde_json::to_vec(&unstamped).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::QMatrix;

    #[test]
    fn um22_has_8_generators_and_28_relations() {
        let um = UmAlgebra::block(2, 1).unwrap();
        let gens = um.pres.gens();
        assert_eq!(gens.len(), 8);
        assert_eq!(um.pres.pairs().count(), 28);
        assert_eq!(build_reduction_system(&um.pres).unwrap().num_rules(), 28);
        // roster naming and weights
        assert_eq!(gens.name(0), "x0");
        assert_eq!(gens.name(2), "x2");
        assert_eq!(gens.name(3), "X1");
        assert_eq!(gens.name(6), "y1");
        assert_eq!(gens.weight(6), 2);
        // relation for (y1, y2): g = y2 y1 - y1 y2 + 1/3 x0^3
        let (y1, y2) = (um.roster.y(1), um.roster.y(2));
        let g = um.pres.relation(y1, y2);
        assert_eq!(g.coeff(&gens.word(vec![0, 0, 0])), s_ratio(1, 3));
        assert_eq!(g.coeff(&gens.word(vec![y2, y1])), s_int(1));
        assert_eq!(g.coeff(&gens.word(vec![y1, y2])), s_int(-1));
    }

    #[test]
    fn um_with_zero_matrix_is_a_loose_semidirect_product() {
        // A = 0: all x,y relations plain commutators, Lie part is gl_r
        let a = QMatrix::zeros(3, 3);
        let um = UmAlgebra::new(&a).unwrap();
        assert_eq!(um.roster.d, 9);
        assert_eq!(um.pres.gens().len(), 16);
        for i in 1..=3usize {
            for j in (i + 1)..=3 {
                assert!(um.pres.f(um.roster.x(i), um.roster.x(j)).is_zero());
                assert!(um.pres.f(um.roster.y(i), um.roster.y(j)).is_zero());
            }
        }
    }

    #[test]
    fn roster_size_matches_gkdim() {
        let um = UmAlgebra::block(3, 1).unwrap();
        assert_eq!(um.pres.gens().len(), 13);
        assert_eq!(gkdim(3, 1).unwrap(), 13);
        assert_eq!(gkdim(2, 1).unwrap(), 8);
        assert_eq!(gkdim(4, 2).unwrap(), 19);
        assert!(gkdim(1, 1).is_err());
    }

    #[test]
    fn hopf_data_shapes() {
        let um = UmAlgebra::block(2, 1).unwrap();
        let gens = um.pres.gens();
        // delta(x0) = x0 (x) 1 + 1 (x) x0
        let d0 = &um.hopf.delta[0];
        assert_eq!(d0.num_terms(), 2);
        // delta(y1) reduced part is x0 (x) x1 - x1 (x) x0
        let dy1 = &um.hopf.delta[um.roster.y(1)];
        assert_eq!(dy1.num_terms(), 4);
        assert_eq!(dy1.coeff(&[gens.letter(0), gens.letter(1)]), s_int(1));
        assert_eq!(dy1.coeff(&[gens.letter(1), gens.letter(0)]), s_int(-1));
        // antipode of a Lie generator is its negative
        let lie1 = um.roster.lie(1);
        assert_eq!(
            um.hopf.antipode[lie1],
            NcPoly::from_term(gens.letter(lie1), s_int(-1))
        );
        // counit vanishes on generators
        assert!(um
            .hopf
            .counit
            .iter()
            .all(|c| c == &Scalar::from_integer(0.into())));
    }

    #[test]
    fn normal_forms_of_the_defining_relations() {
        let um = UmAlgebra::block(2, 1).unwrap();
        let rs = build_reduction_system(&um.pres).unwrap();
        let gens = um.pres.gens();
        // x2 x1 -> x1 x2 - x0
        let nf = rs.normal_form(&NcPoly::from_word(gens.word(vec![2, 1])));
        let mut expected = NcPoly::from_word(gens.word(vec![1, 2]));
        expected.add_term(gens.letter(0), s_int(-1));
        assert_eq!(nf, expected);
        // y2 y1 -> y1 y2 - 1/3 x0^3
        let (y1, y2) = (um.roster.y(1), um.roster.y(2));
        let nf = rs.normal_form(&NcPoly::from_word(gens.word(vec![y2, y1])));
        let mut expected = NcPoly::from_word(gens.word(vec![y1, y2]));
        expected.add_term(gens.word(vec![0, 0, 0]), s_ratio(-1, 3));
        assert_eq!(nf, expected);
        assert_eq!(nf.display(gens), "y1 y2 - 1/3 x0 x0 x0");
        // M x_i -> x_i M - sum_k M_ik x_k, on the first solved basis element
        let m = &um.lie.basis[0];
        let lie1 = um.roster.lie(1);
        let nf = rs.normal_form(&NcPoly::from_word(gens.word(vec![lie1, 1])));
        let mut expected = NcPoly::from_word(gens.word(vec![1, lie1]));
        for k in 1..=2usize {
            expected.add_term(gens.letter(k), -m[(0, k - 1)].clone());
        }
        assert_eq!(nf, expected);
    }

    #[test]
    fn iso_map_identity_and_scaled_block() {
        let b = block_matrix(2, 1);
        let iso = iso_map(&b, &b, &QMatrix::identity(2)).unwrap();
        assert!(iso.report.passed());
        for (id, img) in iso.images.iter().enumerate() {
            assert_eq!(img, &NcPoly::from_word(iso.target.pres.gens().letter(id)));
        }

        let a = QMatrix::from_i64(&[&[0, 2], &[-2, 0]]);
        let c = crate::liealg::congruence_normalize(&a).unwrap();
        let iso = iso_map(&a, &c.b, &c.p).unwrap();
        assert!(iso.report.passed());
    }

    #[test]
    fn iso_map_permutation_of_zero_block_coordinates() {
        // r = 4, s = 1: swap the two zero-block coordinates; P A P^T = A
        let a = block_matrix(4, 1);
        let mut p = QMatrix::identity(4);
        p[(2, 2)] = s_int(0);
        p[(3, 3)] = s_int(0);
        p[(2, 3)] = s_int(1);
        p[(3, 2)] = s_int(1);
        assert_eq!(p.mul(&a).mul(&p.transpose()), a);
        let iso = iso_map(&a, &a, &p).unwrap();
        assert!(iso.report.passed());
    }

    #[test]
    fn congruence_pipeline_handles_rank_deficient_matrices() {
        // a 4x4 antisymmetric matrix of rank 2, built by congruence from the
        // canonical rank-2 form
        let q = QMatrix::from_i64(&[
            &[1, 2, 0, 1],
            &[0, 1, 1, 0],
            &[1, 0, 1, 0],
            &[0, 1, 0, 1],
        ]);
        assert!(q.inverse().is_ok());
        let a = q.transpose().mul(&block_matrix(4, 1)).mul(&q);
        assert!(a.is_antisymmetric());
        let cong = crate::liealg::congruence_normalize(&a).unwrap();
        assert_eq!(cong.s, 1);
        let iso = iso_map(&a, &cong.b, &cong.p).unwrap();
        assert!(iso.report.passed(), "{:?}", iso.report.failures);
    }

    #[test]
    fn iso_map_rejects_non_congruences() {
        let a = block_matrix(2, 1);
        let bad_p = QMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert!(matches!(
            iso_map(&a, &a, &bad_p),
            Err(UmbrellaError::CongruencePrecondition)
        ));
    }

    #[test]
    fn wzz_example_reduces_and_is_confluent() {
        let (pres, _) = build_wzz_example(&s_int(0));
        let rs = build_reduction_system(&pres).unwrap();
        assert!(rs.is_pbw());
        let gens = pres.gens();
        // z y -> y z
        let (y, x, z) = (0usize, 1usize, 2usize);
        let nf = rs.normal_form(&NcPoly::from_word(gens.word(vec![z, y])));
        assert_eq!(nf, NcPoly::from_word(gens.word(vec![y, z])));
        // x y -> y x + y
        let nf = rs.normal_form(&NcPoly::from_word(gens.word(vec![x, y])));
        let mut expected = NcPoly::from_word(gens.word(vec![y, x]));
        expected.add_term(gens.letter(y), s_int(1));
        assert_eq!(nf, expected);
        // also confluent for nonzero lambda
        let (pres1, _) = build_wzz_example(&s_int(1));
        assert!(build_reduction_system(&pres1).unwrap().is_pbw());
    }

    #[test]
    fn symbol_trace_matches_phi_eta_on_um54() {
        let um = UmAlgebra::block(5, 2).unwrap();
        let rs = build_reduction_system(&um.pres).unwrap();
        let ctx = um_context(&um.pres).unwrap();
        let e55 = QMatrix::unit(5, 4, 4);
        let idx = um.lie.basis.iter().position(|m| m == &e55).unwrap();
        let trace = symbol_trace(&rs, &ctx, um.roster.lie(idx + 1));
        assert_eq!(trace, s_int(-2));
        assert_eq!(trace, crate::liealg::phi_eta_matrix(&um.lie, &e55).unwrap());
        // x and y generators have vanishing symbol trace
        assert_eq!(symbol_trace(&rs, &ctx, ctx.roster.x(1)), s_int(0));
        assert_eq!(symbol_trace(&rs, &ctx, ctx.roster.y(3)), s_int(0));
    }

    #[test]
    fn strategy_independence_and_linearity_on_um22() {
        use crate::rewrite::Strategy;
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let um = UmAlgebra::block(2, 1).unwrap();
        let rs = build_reduction_system(&um.pres).unwrap();
        assert!(rs.is_pbw());
        let gens = um.pres.gens().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED + 10);
        let random_poly = |rng: &mut ChaCha8Rng| {
            let mut p = NcPoly::zero();
            for _ in 0..3 {
                let len = rng.gen_range(0..=5usize);
                let mut letters = Vec::new();
                let mut weight = 0;
                for _ in 0..len {
                    let id = rng.gen_range(0..gens.len());
                    if weight + gens.weight(id) > 5 {
                        break;
                    }
                    weight += gens.weight(id);
                    letters.push(id);
                }
                p.add_term(gens.word(letters), s_int(rng.gen_range(-3..=3)));
            }
            p
        };
        for _ in 0..100 {
            let f = random_poly(&mut rng);
            let g = random_poly(&mut rng);
            let left = rs.normal_form_with(&f, Strategy::LeftmostInGreatest);
            let right = rs.normal_form_with(&f, Strategy::RightmostInGreatest);
            assert_eq!(left, right);
            // exact linearity of the normal form
            let a = s_int(rng.gen_range(-3..=3));
            let b = s_int(rng.gen_range(-3..=3));
            let combo = &f.scale(&a) + &g.scale(&b);
            let lhs = rs.normal_form(&combo);
            let rhs = &rs.normal_form(&f).scale(&a) + &rs.normal_form(&g).scale(&b);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn family_is_pbw_through_rank_five() {
        for r in 0..=5usize {
            for s in 0..=(r / 2) {
                let um = UmAlgebra::block(r, s).unwrap();
                let rs = build_reduction_system(&um.pres).unwrap();
                assert!(rs.is_pbw(), "UM({},{}) must be PBW", r, 2 * s);
            }
        }
    }

    #[test]
    fn roster_matches_gkdim_through_rank_six() {
        for r in 0..=6usize {
            for s in 0..=(r / 2) {
                let um = UmAlgebra::block(r, s).unwrap();
                assert_eq!(um.pres.gens().len() as u64, gkdim(r, s).unwrap());
            }
        }
    }

    #[test]
    fn iso_map_verifies_random_congruence_pairs() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED + 11);
        for instance in 0..5 {
            let r = 2 + (instance % 3);
            let mut a = QMatrix::zeros(r, r);
            for i in 0..r {
                for j in (i + 1)..r {
                    let entry = s_ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2));
                    a[(i, j)] = entry.clone();
                    a[(j, i)] = -entry;
                }
            }
            // random invertible P as a product of elementary row operations
            let mut p = QMatrix::identity(r);
            for _ in 0..6 {
                let i = rng.gen_range(0..r);
                let j = rng.gen_range(0..r);
                if i == j {
                    continue;
                }
                let mut e = QMatrix::identity(r);
                e[(i, j)] = s_ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2));
                p = p.mul(&e);
            }
            let a_target = p.mul(&a).mul(&p.transpose());
            let iso = iso_map(&a, &a_target, &p).unwrap();
            assert!(
                iso.report.passed(),
                "instance {instance}: {:?}",
                iso.report.failures
            );
        }
    }

    #[test]
    fn presentation_file_round_trip() {
        let um = UmAlgebra::block(2, 1).unwrap();
        let file = PresentationFile::from_parts(&um.pres, &um.hopf);
        let json = serde_json::to_string_pretty(&file).unwrap();
        let parsed: PresentationFile = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), json);
        let (pres, hopf) = parsed.into_parts().unwrap();
        assert_eq!(pres, um.pres);
        assert_eq!(hopf, um.hopf);
        // canonical bytes ignore the stamp
        let mut stamped = file.clone();
        stamped.verified = Some(VerifiedStamp { algo: "sha256".into(), hash: "ab".into() });
        assert_eq!(file.canonical_bytes(), stamped.canonical_bytes());
    }

    #[test]
    fn wzz_file_round_trip() {
        let (pres, hopf) = build_wzz_example(&s_ratio(1, 2));
        let file = PresentationFile::from_parts(&pres, &hopf);
        let (p2, h2) = file.into_parts().unwrap();
        assert_eq!(pres, p2);
        assert_eq!(hopf, h2);
        assert_eq!(p2.meta.as_ref().unwrap().lambda, Some(s_ratio(1, 2)));
    }
}

//! Generalized Dowling geometries and their weak representations.
//!
//! A normalized presentation turns into a rank-3 triangle matroid whose
//! dependent flats encode the relators. A finite-group homomorphism turns
//! that matroid into a weak c-representation built from regular
//! representation blocks; conversely, any weak representation yields, after
//! a normal form, one invertible matrix per generator satisfying the
//! relators, and the witness rank detects words not killed by the
//! homomorphism.

use crate::exactla::{
    block_rank_pair, block_rank_triple, mat_rank, subspace_sum, LaError, Matrix, PrimeField,
    Subspace,
};
use crate::groups::{FiniteGroup, GroupError, Homomorphism, NormalizedPresentation};
use crate::matroids::{
    ElementLabel, GroundElement, Mask, MatroidError, TriangleMatroid,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DowlingError {
    #[error(transparent)]
    La(#[from] LaError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("normal form failure: {0}")]
    NormalFormFailure(String),
}

/// A finite family of subspaces indexed by matroid element id, together
/// with the normalization constant c.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ArrangementJson", into = "ArrangementJson")]
pub struct Arrangement {
    pub field: PrimeField,
    pub ambient: usize,
    pub c: usize,
    pub subspaces: Vec<Subspace>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ArrangementJson {
    p: u64,
    ambient: usize,
    c: usize,
    subspaces: BTreeMap<String, Subspace>,
}

impl TryFrom<ArrangementJson> for Arrangement {
    type Error = String;
    fn try_from(j: ArrangementJson) -> Result<Self, String> {
        let field = PrimeField::new(j.p).map_err(|e| e.to_string())?;
        let mut subspaces = vec![None; j.subspaces.len()];
        for (k, v) in j.subspaces {
            let id: usize = k.parse().map_err(|_| format!("bad element id {k}"))?;
            if id >= subspaces.len() {
                return Err(format!("element id {id} out of range"));
            }
            if v.field() != field || v.ambient_dim() != j.ambient {
                return Err(format!("subspace {id} has mismatched field or ambient"));
            }
            subspaces[id] = Some(v);
        }
        let subspaces: Option<Vec<Subspace>> = subspaces.into_iter().collect();
        Ok(Arrangement {
            field,
            ambient: j.ambient,
            c: j.c,
            subspaces: subspaces.ok_or("missing element id")?,
        })
    }
}

impl From<Arrangement> for ArrangementJson {
    fn from(a: Arrangement) -> ArrangementJson {
        ArrangementJson {
            p: a.field.modulus(),
            ambient: a.ambient,
            c: a.c,
            subspaces: a
                .subspaces
                .into_iter()
                .enumerate()
                .map(|(i, s)| (i.to_string(), s))
                .collect(),
        }
    }
}

impl Arrangement {
    pub fn n(&self) -> usize {
        self.subspaces.len()
    }

    /// dim of the sum over the elements of the mask.
    pub fn dim_of(&self, x: Mask) -> usize {
        let mut acc = Matrix::zero(self.field, self.ambient, 0);
        for (i, s) in self.subspaces.iter().enumerate() {
            if x >> i & 1 == 1 {
                acc = acc.hstack(s.basis()).expect("same shapes");
            }
        }
        mat_rank(&acc)
    }

    /// Canonical sum subspace over the elements of the mask.
    pub fn sum_of(&self, x: Mask) -> Subspace {
        let mut acc = Matrix::zero(self.field, self.ambient, 0);
        for (i, s) in self.subspaces.iter().enumerate() {
            if x >> i & 1 == 1 {
                acc = acc.hstack(s.basis()).expect("same shapes");
            }
        }
        Subspace::from_spanning(acc)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.subspaces.iter().all(|s| s.dim() == self.c)
    }
}

/// An exact normalized rank value numerator/c, kept unreduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRank {
    pub numerator: usize,
    pub c: usize,
}

impl WitnessRank {
    /// The witness predicate: r^c > 1, i.e. the word is not killed.
    pub fn is_witness(&self) -> bool {
        self.numerator > self.c
    }
}

/// Element id of b^(side) in a Dowling matroid built here (sides 1..3).
pub fn basis_id(side: u8) -> usize {
    side as usize - 1
}

/// Element id of e^(side).
pub fn identity_id(side: u8) -> usize {
    2 + side as usize
}

/// Element id of x^(side) or x^-1(side) by generator position.
pub fn generator_id(gen_index: usize, inverted: bool, side: u8) -> usize {
    6 + 6 * gen_index + if inverted { 3 } else { 0 } + side as usize - 1
}

/// Finds a generator element id by name in a Dowling matroid.
pub fn find_generator_id(
    m: &TriangleMatroid,
    name: &str,
    inverted: bool,
    side: u8,
) -> Option<usize> {
    m.elements.iter().position(|e| {
        matches!(&e.label, ElementLabel::Generator { name: n, inverted: i, side: s }
            if n == name && *i == inverted && *s == side)
    })
}

/// Builds the generalized Dowling geometry of a normalized presentation.
///
/// Ground set: b^(i), e^(i), and x^(i), x^-1(i) per generator; flats are
/// the three side flats, the six cross flats per generator, the identity
/// flat, and one relation flat {x^(2), y^(1), z^(3)} per relator xyz.
pub fn build_dowling(np: &NormalizedPresentation) -> Result<TriangleMatroid, DowlingError> {
    np.validate()?;
    let mut elements = Vec::new();
    for side in 1..=3u8 {
        elements.push(GroundElement {
            id: basis_id(side),
            label: ElementLabel::Basis { side },
        });
    }
    for side in 1..=3u8 {
        elements.push(GroundElement {
            id: identity_id(side),
            label: ElementLabel::Identity { side },
        });
    }
    for (k, name) in np.generators.iter().enumerate() {
        for &inverted in &[false, true] {
            for side in 1..=3u8 {
                elements.push(GroundElement {
                    id: generator_id(k, inverted, side),
                    label: ElementLabel::Generator { name: name.clone(), inverted, side },
                });
            }
        }
    }
    elements.sort_by_key(|e| e.id);

    let bit = |id: usize| 1u32 << id;
    let mut flats2: Vec<Mask> = Vec::new();
    // side flats: side i holds b^(i), b^(i+1) (cyclic), e^(i) and every
    // generator element with that side
    for side in 1..=3u8 {
        let next = if side == 3 { 1 } else { side + 1 };
        let mut f = bit(basis_id(side)) | bit(basis_id(next)) | bit(identity_id(side));
        for k in 0..np.generators.len() {
            f |= bit(generator_id(k, false, side)) | bit(generator_id(k, true, side));
        }
        flats2.push(f);
    }
    // cross flats: {x^(i), x^-1(j), e^(k)} for each generator and each
    // permutation (i,j,k) of (1,2,3)
    for g in 0..np.generators.len() {
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                if i == j {
                    continue;
                }
                let k = 6 - i - j;
                flats2.push(
                    bit(generator_id(g, false, i))
                        | bit(generator_id(g, true, j))
                        | bit(identity_id(k)),
                );
            }
        }
    }
    // the identity flat
    flats2.push(bit(identity_id(1)) | bit(identity_id(2)) | bit(identity_id(3)));
    // relation flats: relator xyz yields {x^(2), y^(1), z^(3)}
    let letter_id = |l: &crate::groups::Letter, side: u8| -> usize {
        let k = np.generators.iter().position(|g| g == &l.0).expect("validated");
        generator_id(k, l.1 == -1, side)
    };
    for r in &np.relators {
        flats2.push(bit(letter_id(&r[0], 2)) | bit(letter_id(&r[1], 1)) | bit(letter_id(&r[2], 3)));
    }

    let m = TriangleMatroid { elements, basis: [0, 1, 2], flats2 };
    m.validate()?;
    Ok(m)
}

/// Block column (top; mid; bot) of three c x c matrices, as a subspace of
/// F^(3c).
fn block_column(top: &Matrix, mid: &Matrix, bot: &Matrix) -> Subspace {
    let m = Matrix::from_blocks(&[vec![top], vec![mid], vec![bot]]).expect("uniform blocks");
    Subspace::from_spanning(m)
}

/// Builds the weak c-representation A_{G,phi} of a Dowling matroid from a
/// finite-group homomorphism; c = |G|, ambient 3c.
pub fn build_weak_rep(
    m: &TriangleMatroid,
    np: &NormalizedPresentation,
    group: &FiniteGroup,
    hom: &Homomorphism,
    field: PrimeField,
) -> Result<Arrangement, DowlingError> {
    group.validate()?;
    hom.validate(np, group)?;
    let expected = build_dowling(np)?;
    if *m != expected {
        return Err(DowlingError::PreconditionViolation(
            "matroid is not the Dowling geometry of this presentation".into(),
        ));
    }
    let c = group.n;
    let rho = group.regular_representation();
    let i = Matrix::identity(field, c);
    let z = Matrix::zero(field, c, c);
    let mut subspaces = vec![Subspace::zero(field, 3 * c); m.n()];
    // basis elements: the three coordinate blocks
    for side in 1..=3u8 {
        let blocks: [&Matrix; 3] = match side {
            1 => [&i, &z, &z],
            2 => [&z, &i, &z],
            _ => [&z, &z, &i],
        };
        subspaces[basis_id(side)] = block_column(blocks[0], blocks[1], blocks[2]);
    }
    // one column pattern per side, with rho(phi(x)) in the moving block
    let mi = i.neg();
    let place = |rho_mat: &Matrix, side: u8| -> Subspace {
        match side {
            1 => block_column(&mi, rho_mat, &z),
            2 => block_column(&z, &mi, rho_mat),
            _ => block_column(rho_mat, &z, &mi),
        }
    };
    for side in 1..=3u8 {
        subspaces[identity_id(side)] = place(&i, side);
    }
    for (k, _) in np.generators.iter().enumerate() {
        let g = hom.images[k];
        let g_inv = group.inverse(g);
        for side in 1..=3u8 {
            subspaces[generator_id(k, false, side)] = place(&rho[g].matrix(field), side);
            subspaces[generator_id(k, true, side)] = place(&rho[g_inv].matrix(field), side);
        }
    }
    Ok(Arrangement { field, ambient: 3 * c, c, subspaces })
}

/// A subset violating one of the weak-representation conditions, if any.
///
/// Conditions: c * r(X) >= dim(A_X) for every X, with equality whenever X
/// has at most one element outside the basis. Exhaustive over all subsets.
pub fn weak_rep_violation(
    a: &Arrangement,
    m: &TriangleMatroid,
) -> Result<Option<Mask>, DowlingError> {
    if a.n() != m.n() {
        return Err(DowlingError::PreconditionViolation(
            "arrangement and matroid ground sets differ".into(),
        ));
    }
    if !a.is_homogeneous() {
        return Err(DowlingError::PreconditionViolation(
            "arrangement is not c-homogeneous".into(),
        ));
    }
    let bmask = m.basis_mask();
    for x in 0..(1u64 << m.n()) as Mask {
        let dim = a.dim_of(x);
        let bound = a.c * m.rank(x)? as usize;
        if dim > bound {
            return Ok(Some(x));
        }
        if (x & !bmask).count_ones() <= 1 && dim != bound {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// The weak-representation predicate (see [`weak_rep_violation`]).
pub fn is_weak_rep(a: &Arrangement, m: &TriangleMatroid) -> Result<bool, DowlingError> {
    Ok(weak_rep_violation(a, m)?.is_none())
}

/// The witness rank r^c(A_{w^(1)} + A_{e^(1)}), unreduced.
///
/// The instance is witnessed negative (phi(w) != e) exactly when the
/// numerator exceeds c.
pub fn witness_rank(
    a: &Arrangement,
    m: &TriangleMatroid,
    np: &NormalizedPresentation,
) -> Result<WitnessRank, DowlingError> {
    if !is_weak_rep(a, m)? {
        return Err(DowlingError::PreconditionViolation(
            "arrangement is not a weak representation".into(),
        ));
    }
    let w_id = find_generator_id(m, &np.word, false, 1).ok_or_else(|| {
        DowlingError::PreconditionViolation(format!("word {} not in ground set", np.word))
    })?;
    let x = (1u32 << w_id) | (1u32 << identity_id(1));
    Ok(WitnessRank { numerator: a.dim_of(x), c: a.c })
}

/// Audit data from group extraction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractAudit {
    /// block_rank_triple of each relator's (T_y, T_x, T_z); must equal 2c.
    pub relator_triple_ranks: Vec<usize>,
    /// rk(T_x - I) per generator: a similarity invariant of the group
    /// element represented by x.
    pub generator_rank_invariants: BTreeMap<String, usize>,
}

/// Extracts one invertible c x c matrix per generator from a weak
/// representation, via the four-step normal form.
///
/// Steps: (1) an ambient change of basis makes the three basis subspaces
/// coordinate blocks; (2) every non-basis subspace is column-normalized to
/// have -I in its side's home block; (3) block row transformations make the
/// identity columns e^(1), e^(2) canonical, which forces e^(3) canonical as
/// well; (4) the moving blocks are read off, checked consistent across
/// sides and inverses, and relator products are audited by the block-rank
/// lemma.
pub fn extract_group(
    a: &Arrangement,
    m: &TriangleMatroid,
    np: &NormalizedPresentation,
) -> Result<(BTreeMap<String, Matrix>, ExtractAudit), DowlingError> {
    if !is_weak_rep(a, m)? {
        return Err(DowlingError::PreconditionViolation(
            "arrangement is not a weak representation".into(),
        ));
    }
    let c = a.c;
    let f = a.field;
    // step 1: ambient change of basis
    let mb = a.subspaces[basis_id(1)]
        .basis()
        .hstack(a.subspaces[basis_id(2)].basis())?
        .hstack(a.subspaces[basis_id(3)].basis())?;
    let mb_inv = mb
        .inverse()
        .ok_or_else(|| DowlingError::NormalFormFailure("basis blocks do not span".into()))?;
    let mut bases: Vec<Matrix> = a
        .subspaces
        .iter()
        .map(|s| mb_inv.mul(s.basis()))
        .collect::<Result<_, _>>()?;

    let side_of = |id: usize| -> u8 {
        match &m.elements[id].label {
            ElementLabel::Basis { side } => *side,
            ElementLabel::Identity { side } => *side,
            ElementLabel::Generator { side, .. } => *side,
        }
    };
    let block = |mat: &Matrix, b: usize| -> Matrix {
        let mut out = Matrix::zero(f, c, mat.cols());
        for i in 0..c {
            for j in 0..mat.cols() {
                out.set(i, j, mat.at(b * c + i, j));
            }
        }
        out
    };
    // step 2: column-normalize each non-basis element so its home block
    // (side 1 -> top, side 2 -> middle, side 3 -> bottom) equals -I
    let home_block = |side: u8| side as usize - 1;
    let moving_block = |side: u8| side as usize % 3;
    for id in 0..bases.len() {
        if matches!(m.elements[id].label, ElementLabel::Basis { .. }) {
            continue;
        }
        let side = side_of(id);
        let home = block(&bases[id], home_block(side));
        let hinv = home.inverse().ok_or_else(|| {
            DowlingError::NormalFormFailure(format!("home block of element {id} is singular"))
        })?;
        bases[id] = bases[id].mul(&hinv.neg())?;
    }
    // step 3: block row transformations normalizing e^(1) and e^(2)
    let e1_mid = block(&bases[identity_id(1)], 1);
    let e1_inv = e1_mid
        .inverse()
        .ok_or_else(|| DowlingError::NormalFormFailure("e^(1) moving block singular".into()))?;
    for (id, b) in bases.iter_mut().enumerate() {
        // v2 <- E^-1 v2 applied to the middle block rows; then re-normalize
        // home blocks of side-2 elements
        let top = block(b, 0);
        let mid = e1_inv.mul(&block(b, 1))?;
        let bot = block(b, 2);
        *b = Matrix::from_blocks(&[vec![&top], vec![&mid], vec![&bot]])?;
        if side_of(id) == 2 && !matches!(m.elements[id].label, ElementLabel::Basis { .. }) {
            let home = block(b, 1);
            let hinv = home.inverse().ok_or_else(|| {
                DowlingError::NormalFormFailure(format!("element {id} home block singular"))
            })?;
            *b = b.mul(&hinv.neg())?;
        }
    }
    let e2_bot = block(&bases[identity_id(2)], 2);
    let e2_inv = e2_bot
        .inverse()
        .ok_or_else(|| DowlingError::NormalFormFailure("e^(2) moving block singular".into()))?;
    for (id, b) in bases.iter_mut().enumerate() {
        let top = block(b, 0);
        let mid = block(b, 1);
        let bot = e2_inv.mul(&block(b, 2))?;
        *b = Matrix::from_blocks(&[vec![&top], vec![&mid], vec![&bot]])?;
        if side_of(id) == 3 && !matches!(m.elements[id].label, ElementLabel::Basis { .. }) {
            let home = block(b, 2);
            let hinv = home.inverse().ok_or_else(|| {
                DowlingError::NormalFormFailure(format!("element {id} home block singular"))
            })?;
            *b = b.mul(&hinv.neg())?;
        }
    }
    // the identity flat forces e^(3) into canonical position
    let e3_top = block(&bases[identity_id(3)], 0);
    if !e3_top.is_identity() {
        return Err(DowlingError::NormalFormFailure(
            "e^(3) did not normalize to (I; 0; -I)".into(),
        ));
    }
    // step 4: read off moving blocks, check consistency, audit relators
    let read_t = |bases: &[Matrix], id: usize| -> Matrix {
        block(&bases[id], moving_block(side_of(id)))
    };
    let mut ts: BTreeMap<String, Matrix> = BTreeMap::new();
    for (k, name) in np.generators.iter().enumerate() {
        let t1 = read_t(&bases, generator_id(k, false, 1));
        for side in 2..=3u8 {
            let t = read_t(&bases, generator_id(k, false, side));
            if t != t1 {
                return Err(DowlingError::NormalFormFailure(format!(
                    "T_{name} differs between side 1 and side {side}"
                )));
            }
        }
        let t1_inv = t1.inverse().ok_or_else(|| {
            DowlingError::NormalFormFailure(format!("T_{name} is singular"))
        })?;
        for side in 1..=3u8 {
            let t = read_t(&bases, generator_id(k, true, side));
            if t != t1_inv {
                return Err(DowlingError::NormalFormFailure(format!(
                    "T_{name}^-1 inconsistent on side {side}"
                )));
            }
        }
        ts.insert(name.clone(), t1);
    }
    // identity columns must carry T = I
    for side in 1..=3u8 {
        if !read_t(&bases, identity_id(side)).is_identity() {
            return Err(DowlingError::NormalFormFailure(format!(
                "e^({side}) moving block is not the identity"
            )));
        }
    }
    let letter_t = |l: &crate::groups::Letter| -> Result<Matrix, DowlingError> {
        let t = &ts[&l.0];
        if l.1 == 1 {
            Ok(t.clone())
        } else {
            t.inverse()
                .ok_or_else(|| DowlingError::NormalFormFailure("singular letter".into()))
        }
    };
    let mut relator_triple_ranks = Vec::new();
    for r in &np.relators {
        // relator xyz: the product T_x T_y T_z must be I; audited through
        // the block-rank lemma with A = T_y, B = T_x, C = T_z
        let (tx, ty, tz) = (letter_t(&r[0])?, letter_t(&r[1])?, letter_t(&r[2])?);
        let rank = block_rank_triple(&ty, &tx, &tz)?;
        if rank != 2 * c {
            return Err(DowlingError::NormalFormFailure(format!(
                "relator {r:?} product is not the identity (triple rank {rank} != {})",
                2 * c
            )));
        }
        relator_triple_ranks.push(rank);
    }
    let i = Matrix::identity(f, c);
    let generator_rank_invariants = ts
        .iter()
        .map(|(name, t)| Ok((name.clone(), mat_rank(&t.sub(&i)?))))
        .collect::<Result<_, LaError>>()?;
    Ok((ts, ExtractAudit { relator_triple_ranks, generator_rank_invariants }))
}

/// Independent check of the witness numerator: c + rk(rho(phi(w)) - I),
/// through the pair block-rank lemma.
pub fn witness_rank_oracle(
    group: &FiniteGroup,
    hom: &Homomorphism,
    np: &NormalizedPresentation,
    field: PrimeField,
) -> Result<usize, DowlingError> {
    let widx = np
        .generator_index(&np.word)
        .ok_or_else(|| DowlingError::PreconditionViolation("word not a generator".into()))?;
    let rho = group.regular_representation();
    let g = hom.images[widx];
    let pw = rho[g].matrix(field);
    let i = Matrix::identity(field, group.n);
    Ok(block_rank_pair(&i, &pw)?)
}

/// Sum two arrangement members and compare with subspace_sum (used by
/// tests as a second route to dim_of).
pub fn pairwise_sum_dim(a: &Arrangement, i: usize, j: usize) -> usize {
    subspace_sum(&a.subspaces[i], &a.subspaces[j]).expect("compatible").dim()
}

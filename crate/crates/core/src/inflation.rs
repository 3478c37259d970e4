//! Algebraic inflation of subspace arrangements.
//!
//! Inflation enlarges the subspaces of a chosen subset S in two elementary
//! steps so that S becomes full (its defect drops to zero) while every
//! other rank changes by a controlled amount. Generic choices are sampled
//! from a seeded generator and verified against the dimension-change
//! formulas; failures resample with an incremented seed a bounded number
//! of times.

use crate::dowling::{is_weak_rep, Arrangement, DowlingError};
use crate::exactla::{
    random_generic_subspace, subspace_intersect, subspace_sum, LaError, Matrix, Subspace,
};
use crate::matroids::{submasks, Mask, MatroidError, TriangleMatroid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Retry budget for generic sampling, per the genericity policy.
pub const MAX_RETRIES: u64 = 8;

#[derive(Debug, Error)]
pub enum InflationError {
    #[error(transparent)]
    La(#[from] LaError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Dowling(#[from] DowlingError),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("subset {0:#x} has a proper subset that is not full")]
    NotAllProperSubsetsFull(Mask),
    #[error("generic sampling failed: {0}")]
    GenericityFailure(String),
    #[error("c = {0} is odd; double the arrangement first")]
    OddC(usize),
}

/// An arrangement that extends a weak c-representation of a matroid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionArrangement {
    pub arr: Arrangement,
    pub matroid: TriangleMatroid,
}

/// Audit record of a single inflation step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflationStep {
    pub subset: Mask,
    pub defect_before: usize,
    /// Dimensions added to the inflation subspace W in steps 1 and 2.
    pub dims_added: (usize, usize),
    pub seeds_used: Vec<u64>,
    pub ambient_growth: usize,
}

/// Audit log of an inflation run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflationTrace {
    pub steps: Vec<InflationStep>,
}

impl ExtensionArrangement {
    /// Wraps a weak representation as the start of an inflation pipeline.
    pub fn from_weak_rep(
        arr: Arrangement,
        matroid: TriangleMatroid,
    ) -> Result<Self, InflationError> {
        if !is_weak_rep(&arr, &matroid)? {
            return Err(InflationError::PreconditionViolation(
                "arrangement is not a weak representation of the matroid".into(),
            ));
        }
        Ok(ExtensionArrangement { arr, matroid })
    }

    pub fn c(&self) -> usize {
        self.arr.c
    }

    /// U_B, the sum of the basis subspaces.
    pub fn basis_space(&self) -> Subspace {
        self.arr.sum_of(self.matroid.basis_mask())
    }
}

/// The defect de_U(S) = c * r(S) - dim(U_S ∩ U_B).
pub fn defect(u: &ExtensionArrangement, s: Mask) -> Result<usize, InflationError> {
    if s & u.matroid.basis_mask() != 0 {
        return Err(InflationError::PreconditionViolation(
            "defect is defined for subsets of E \\ B".into(),
        ));
    }
    let us = u.arr.sum_of(s);
    let ub = u.basis_space();
    let meet = subspace_intersect(&us, &ub)?;
    let cr = u.c() * u.matroid.rank(s)? as usize;
    Ok(cr - meet.dim())
}

/// S is full when its defect vanishes.
pub fn is_full(u: &ExtensionArrangement, s: Mask) -> Result<bool, InflationError> {
    Ok(defect(u, s)? == 0)
}

/// The extension predicate, exhaustive over all T ⊆ E and D ⊆ B: the
/// intersected family {U_e ∩ U_B} is a weak representation, and
/// dim(U_T ∩ U_D) ≤ c (r(T) + r(D) − r(T∪D)).
pub fn is_extension_arr(u: &Arrangement, m: &TriangleMatroid) -> Result<bool, InflationError> {
    let all: Vec<Mask> = (0..(1u64 << m.n()) as Mask).collect();
    is_extension_on(u, m, &all)
}

/// The extension predicate restricted to a given family of subsets T.
pub fn is_extension_on(
    u: &Arrangement,
    m: &TriangleMatroid,
    ts: &[Mask],
) -> Result<bool, InflationError> {
    let intersected = intersect_to_weak(u, m)?;
    if !intersected.is_homogeneous() || !is_weak_rep(&intersected, m)? {
        return Ok(false);
    }
    let bmask = m.basis_mask();
    let dsums: Vec<(Mask, Subspace)> = submasks(bmask)
        .into_iter()
        .map(|d| (d, u.sum_of(d)))
        .collect();
    for &t in ts {
        let ut = u.sum_of(t);
        for (d, ud) in &dsums {
            let meet = subspace_intersect(&ut, ud)?;
            let bound = u.c as i64
                * (m.rank(t)? as i64 + m.rank(*d)? as i64 - m.rank(t | d)? as i64);
            if (meet.dim() as i64) > bound {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Replaces each subspace by its intersection with U_B; the inflation
/// pipeline's way back to a weak representation.
pub fn intersect_to_weak(u: &Arrangement, m: &TriangleMatroid) -> Result<Arrangement, InflationError> {
    let ub = u.sum_of(m.basis_mask());
    let subspaces = u
        .subspaces
        .iter()
        .map(|s| subspace_intersect(s, &ub))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Arrangement { field: u.field, ambient: u.ambient, c: u.c, subspaces })
}

/// Block-diagonal double: ambient, c and every subspace dimension double,
/// and the normalized rank function is unchanged.
pub fn double_arr(u: &Arrangement) -> Arrangement {
    Arrangement {
        field: u.field,
        ambient: 2 * u.ambient,
        c: 2 * u.c,
        subspaces: u.subspaces.iter().map(|s| s.double()).collect(),
    }
}

/// Well-separatedness of U with respect to x over the given subsets T:
/// either A_x ⊆ U_T or dim(A_x ∩ U_T) ≤ c/2, where A_x = U_x ∩ U_B.
pub fn is_well_separated_on(
    u: &ExtensionArrangement,
    x: usize,
    ts: &[Mask],
) -> Result<bool, InflationError> {
    let c = u.c();
    if c % 2 != 0 {
        return Err(InflationError::OddC(c));
    }
    let ax = subspace_intersect(&u.arr.subspaces[x], &u.basis_space())?;
    for &t in ts {
        let ut = u.arr.sum_of(t);
        let meet = subspace_intersect(&ax, &ut)?;
        if meet.dim() == ax.dim() {
            continue; // A_x ⊆ U_T
        }
        if meet.dim() > c / 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive well-separatedness over all subsets of the ground set.
pub fn is_well_separated(u: &ExtensionArrangement, x: usize) -> Result<bool, InflationError> {
    let all: Vec<Mask> = (0..(1u64 << u.matroid.n()) as Mask).collect();
    is_well_separated_on(u, x, &all)
}

/// Probe subsets for sampled postcondition checks: all subsets when the
/// ground set is small, otherwise small subsets plus a seeded sample.
pub fn probe_subsets(n: usize, extra_seed: u64, count: usize) -> Vec<Mask> {
    if n <= 6 {
        return (0..(1u32 << n)).collect();
    }
    let mut out: Vec<Mask> = vec![0];
    for i in 0..n {
        out.push(1 << i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(extra_seed);
    let full = ((1u64 << n) - 1) as Mask;
    for _ in 0..count {
        out.push(rng.gen_range(0..=full));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Elementary inflation: enlarges each U_e, e ∈ S, by a generic c-dim
/// subspace of a d-dimensional space W that meets the old ambient exactly
/// in w_prime. The dimension-change formula is verified on probe subsets;
/// sampling retries with seed+1 up to [`MAX_RETRIES`] times.
pub fn elementary_inflation(
    u: &Arrangement,
    s: Mask,
    d: usize,
    w_prime: &Subspace,
    seed: u64,
) -> Result<(Arrangement, Vec<u64>), InflationError> {
    let c = u.c;
    let k = s.count_ones() as usize;
    if k == 0 {
        return Err(InflationError::PreconditionViolation("empty inflation subset".into()));
    }
    if d < c * (k - 1) || d > c * k {
        return Err(InflationError::PreconditionViolation(format!(
            "d = {d} outside [c(|S|-1), c|S|] = [{}, {}]",
            c * (k - 1),
            c * k
        )));
    }
    if w_prime.ambient_dim() != u.ambient || w_prime.field() != u.field {
        return Err(InflationError::PreconditionViolation(
            "w_prime must live in the current ambient space".into(),
        ));
    }
    if w_prime.dim() > c {
        return Err(InflationError::PreconditionViolation(
            "dim(w_prime) must be at most c".into(),
        ));
    }
    let fresh = d - w_prime.dim();
    let new_ambient = u.ambient + fresh;
    // W = lift(w_prime) + the fresh coordinates
    let mut w_basis = Matrix::zero(u.field, new_ambient, w_prime.dim() + fresh);
    for i in 0..u.ambient {
        for j in 0..w_prime.dim() {
            w_basis.set(i, j, w_prime.basis().at(i, j));
        }
    }
    for j in 0..fresh {
        w_basis.set(u.ambient + j, w_prime.dim() + j, 1);
    }
    let w = Subspace::from_spanning(w_basis);
    debug_assert_eq!(w.dim(), d);

    // dims before, for the postcondition probes
    let probes = probe_subsets(u.n(), seed ^ 0x9e37_79b9, 64);
    let old_dims: Vec<usize> = probes.iter().map(|&t| u.dim_of(t)).collect();
    let old_meet_wprime: Vec<usize> = probes
        .iter()
        .map(|&t| Ok(subspace_intersect(&u.sum_of(t), w_prime)?.dim()))
        .collect::<Result<_, LaError>>()?;

    let lifted: Vec<Subspace> = u.subspaces.iter().map(|x| x.lift(new_ambient)).collect();
    let mut seeds_used = Vec::new();
    'attempt: for attempt in 0..MAX_RETRIES {
        let base_seed = seed + attempt;
        let mut subspaces = lifted.clone();
        let mut members = Vec::new();
        for (j, e) in (0..u.n()).filter(|&e| s >> e & 1 == 1).enumerate() {
            // a generic c-dim subspace of W is all of W when dim(W) < c
            // (possible only for |s| = 1, where d may be as small as 0)
            let piece =
                random_generic_subspace(&w, c.min(d), base_seed.wrapping_add(101 * j as u64))?;
            subspaces[e] = subspace_sum(&subspaces[e], &piece)?;
            members.push(e);
        }
        let cand = Arrangement { field: u.field, ambient: new_ambient, c, subspaces };
        // verify the dimension-change formula on all probes
        for ((&t, &old), &mw) in probes.iter().zip(&old_dims).zip(&old_meet_wprime) {
            let expected = if s & !t != 0 {
                old + c * (s & t).count_ones() as usize
            } else {
                old + d - mw
            };
            if cand.dim_of(t) != expected {
                seeds_used.push(base_seed);
                continue 'attempt;
            }
        }
        seeds_used.push(base_seed);
        return Ok((cand, seeds_used));
    }
    Err(InflationError::GenericityFailure(format!(
        "elementary inflation of {s:#x} failed the dimension-change check {MAX_RETRIES} times"
    )))
}

/// One full inflation I(U, S): elementary step with d = c(|S|-1) + defect
/// and W' = 0, then elementary step with d = c|S| and W' a generic
/// defect-dimensional subspace of U_{C_M(S)}. Requires every proper subset
/// of S to be full; afterwards S itself is full.
pub fn inflate(
    u: &ExtensionArrangement,
    s: Mask,
    seed: u64,
) -> Result<(ExtensionArrangement, InflationStep), InflationError> {
    let m = &u.matroid;
    let c = u.c();
    if s == 0 || s & m.basis_mask() != 0 {
        return Err(InflationError::PreconditionViolation(
            "inflation subset must be nonempty and disjoint from the basis".into(),
        ));
    }
    for z in submasks(s) {
        if z != s && !is_full(u, z)? {
            return Err(InflationError::NotAllProperSubsetsFull(s));
        }
    }
    let de = defect(u, s)?;
    let k = s.count_ones() as usize;
    if de > c {
        return Err(InflationError::PreconditionViolation(format!(
            "defect {de} exceeds c = {c}; input is not an extension"
        )));
    }

    // rank data needed for the postconditions, measured before inflating
    let small = m.n() <= 6;
    let disjoint_probes: Vec<Mask> = probe_subsets(m.n(), seed ^ 0x51ed_270b, 24)
        .into_iter()
        .map(|t| t & !s)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let zs = submasks(s);
    let c_m = m.c_m_or_empty(s)?;
    // (probe T∪Z, old dim of the formula's reference set, which is
    // T∪S∪C_M(S) when Z = S and T∪Z itself otherwise)
    let mut before: Vec<(Mask, usize)> = Vec::new();
    for &t in &disjoint_probes {
        for &z in &zs {
            let reference = if z == s { t | s | c_m } else { t | z };
            before.push((t | z, u.arr.dim_of(reference)));
        }
    }

    // step 1
    let zero = Subspace::zero(u.arr.field, u.arr.ambient);
    let (u1, mut seeds_used) = elementary_inflation(&u.arr, s, c * (k - 1) + de, &zero, seed)?;

    // step 2: W' generic of dimension `de` inside U_{C_M(S)}, chosen in the
    // step-1 ambient, verified to meet U_S trivially and to complement
    // U_S ∩ U_B inside U_{C_M(S)}
    let u_cm = u1.sum_of(c_m);
    let u_s = u1.sum_of(s);
    let meet_sb = subspace_intersect(&u_s, &u1.sum_of(m.basis_mask()))?;
    let mut w_prime = Subspace::zero(u1.field, u1.ambient);
    if de > 0 {
        const W_SEED_OFFSET: u64 = 0x57a6_1e55;
        let mut ok = false;
        for attempt in 0..MAX_RETRIES {
            let ws = seed.wrapping_add(W_SEED_OFFSET).wrapping_add(attempt);
            let cand = random_generic_subspace(&u_cm, de, ws)?;
            seeds_used.push(ws);
            let disjoint = subspace_intersect(&cand, &u_s)?.dim() == 0;
            let complements =
                subspace_sum(&meet_sb, &cand)?.dim() == meet_sb.dim() + de;
            if disjoint && complements {
                w_prime = cand;
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(InflationError::GenericityFailure(
                "no generic W' complementing U_S inside U_{C_M(S)}".into(),
            ));
        }
    }
    let (u2, mut seeds2) = elementary_inflation(&u1, s, c * k, &w_prime, seed ^ 0xa5a5)?;
    seeds_used.append(&mut seeds2);

    let out = ExtensionArrangement { arr: u2, matroid: m.clone() };

    // postconditions: the two-case rank formula, fullness, extension
    for &(probe, old_dim) in &before {
        let z = probe & s;
        let expected = if z == s {
            old_dim + c * (2 * k - 1)
        } else {
            old_dim + 2 * c * z.count_ones() as usize
        };
        if out.arr.dim_of(probe) != expected {
            return Err(InflationError::GenericityFailure(format!(
                "rank-change formula failed at subset {probe:#x}: got {}, expected {expected}",
                out.arr.dim_of(probe)
            )));
        }
    }
    if !is_full(&out, s)? {
        return Err(InflationError::GenericityFailure(format!(
            "subset {s:#x} is not full after inflation"
        )));
    }
    let ext_ok = if small {
        is_extension_arr(&out.arr, m)?
    } else {
        let probes = probe_subsets(m.n(), seed ^ 0x0ddc_0ffe, 24);
        is_extension_on(&out.arr, m, &probes)?
    };
    if !ext_ok {
        return Err(InflationError::GenericityFailure(
            "extension predicate failed after inflation".into(),
        ));
    }

    let step = InflationStep {
        subset: s,
        defect_before: de,
        dims_added: (c * (k - 1) + de, c * k),
        seeds_used,
        ambient_growth: out.arr.ambient - u.arr.ambient,
    };
    Ok((out, step))
}

/// Runs the inflation pipeline over an inclusion-refining subset order,
/// skipping the empty set, truncated at max_steps.
pub fn full_alg_pipeline(
    a: &Arrangement,
    m: &TriangleMatroid,
    order: &crate::matroids::SubsetOrder,
    max_steps: Option<usize>,
    seed: u64,
) -> Result<(ExtensionArrangement, InflationTrace), InflationError> {
    order.validate()?;
    let mut u = ExtensionArrangement::from_weak_rep(a.clone(), m.clone())?;
    let mut trace = InflationTrace::default();
    let steps: Vec<Mask> = order.order.iter().copied().filter(|&s| s != 0).collect();
    let k = max_steps.unwrap_or(steps.len()).min(steps.len());
    for (i, &s) in steps[..k].iter().enumerate() {
        let step_seed = seed.wrapping_add((i as u64 + 1) << 20);
        let (next, record) = inflate(&u, s, step_seed)?;
        u = next;
        trace.steps.push(record);
    }
    Ok((u, trace))
}

/// Choice of the y column in the small end-to-end fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyVariant {
    /// Y is the swap matrix: A_x and A_y meet in a line.
    Swap,
    /// Y = X = I: A_x = A_y, the separation control case.
    Control,
    /// Y = 2I: A_x and A_y meet trivially.
    Disjoint,
}

/// The canonical small fixture: the toy triangle matroid represented with
/// c = 2 in ambient dimension 6, A_x = col(-I; I; 0) and A_y = col(-I; Y; 0).
pub fn toy_weak_rep(
    field: crate::exactla::PrimeField,
    variant: ToyVariant,
) -> (TriangleMatroid, Arrangement) {
    let m = crate::matroids::toy_matroid();
    let i = Matrix::identity(field, 2);
    let z = Matrix::zero(field, 2, 2);
    let y = match variant {
        ToyVariant::Swap => Matrix::from_rows(field, &[vec![0, 1], vec![1, 0]]),
        ToyVariant::Control => i.clone(),
        ToyVariant::Disjoint => i.scale(2),
    };
    let col = |top: &Matrix, mid: &Matrix, bot: &Matrix| {
        Subspace::from_spanning(
            Matrix::from_blocks(&[vec![top], vec![mid], vec![bot]]).expect("uniform"),
        )
    };
    let mi = i.neg();
    let subspaces = vec![
        col(&i, &z, &z),  // b1
        col(&z, &i, &z),  // b2
        col(&z, &z, &i),  // b3
        col(&mi, &i, &z), // x
        col(&mi, &y, &z), // y
    ];
    (m, Arrangement { field, ambient: 6, c: 2, subspaces })
}

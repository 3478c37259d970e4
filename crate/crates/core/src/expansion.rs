//! c-bases, free expansions, and the separation machinery.
//!
//! A c-admissible arrangement splits into a c-basis: generic c-dimensional
//! pieces of each subspace forming a c-arrangement. Its combinatorial type
//! is an expansion of the normalized rank function; the freest such
//! expansion has an explicit independence criterion. Separation is a pair
//! of rank equations on an expansion of a doubled polymatroid certifying
//! that two bottom elements have distinct weak-representation subspaces.

use crate::dowling::Arrangement;
use crate::exactla::{mat_rank, random_generic_subspace, LaError, Matrix, Subspace};
use crate::inflation::{is_well_separated_on, ExtensionArrangement, InflationError, MAX_RETRIES};
use crate::matroids::{Mask, MatroidError, Polymatroid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Masks over the expanded ground set (pairs (element, copy)).
pub type EMask = u32;

/// Hard cap on expanded ground sets indexed by dense masks.
pub const MAX_EXPANDED: usize = 24;

/// Largest expanded ground for exhaustive (2^n) predicate sweeps.
pub const MAX_EXHAUSTIVE: usize = 16;

/// Sample count for c-admissibility checks above the exhaustive cutoff.
pub const ADMISSIBILITY_SAMPLES: usize = 256;

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error(transparent)]
    La(#[from] LaError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Inflation(#[from] InflationError),
    #[error("arrangement is not c-admissible: {0}")]
    NotCAdmissible(String),
    #[error("multiplicities do not match the polymatroid: {0}")]
    MultiplicityMismatch(String),
    #[error("not an expansion of the given polymatroid: {0}")]
    NotAnExpansion(String),
    #[error("arrangement is not well-separated with respect to element {0}")]
    NotWellSeparated(usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("expanded ground sets differ")]
    GroundMismatch,
    #[error("generic sampling failed: {0}")]
    GenericityFailure(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}

/// The ground set {(e, i) | e ∈ E, 1 ≤ i ≤ multiplicity(e)} of an
/// expansion, listed in (element, copy) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedGround {
    pub pairs: Vec<(usize, usize)>,
}

impl ExpandedGround {
    /// Builds the ground from per-element multiplicities.
    pub fn from_multiplicities(mults: &[u64]) -> Result<Self, ExpansionError> {
        let total: u64 = mults.iter().sum();
        if total as usize > MAX_EXPANDED {
            return Err(ExpansionError::TooLarge(format!(
                "expanded ground has {total} pairs, max {MAX_EXPANDED}"
            )));
        }
        let mut pairs = Vec::new();
        for (e, &m) in mults.iter().enumerate() {
            for i in 1..=m as usize {
                pairs.push((e, i));
            }
        }
        Ok(ExpandedGround { pairs })
    }

    /// One pair per singleton value of the polymatroid.
    pub fn from_polymatroid(g: &Polymatroid) -> Result<Self, ExpansionError> {
        let mults: Vec<u64> = (0..g.n).map(|e| g.g(1 << e)).collect();
        Self::from_multiplicities(&mults)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn full_mask(&self) -> EMask {
        if self.pairs.is_empty() {
            0
        } else {
            ((1u64 << self.pairs.len()) - 1) as EMask
        }
    }

    /// Number of distinct parent elements (1 + the largest element id).
    pub fn parent_n(&self) -> usize {
        self.pairs.iter().map(|&(e, _)| e + 1).max().unwrap_or(0)
    }

    /// Multiplicity of each parent element.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.parent_n()];
        for &(e, _) in &self.pairs {
            out[e] += 1;
        }
        out
    }

    /// Mask of all copies of element e.
    pub fn block_mask(&self, e: usize) -> EMask {
        let mut m = 0;
        for (idx, &(f, _)) in self.pairs.iter().enumerate() {
            if f == e {
                m |= 1 << idx;
            }
        }
        m
    }

    /// Mask of all copies of every element of the parent subset.
    pub fn blocks_of(&self, parent: Mask) -> EMask {
        let mut m = 0;
        for (idx, &(f, _)) in self.pairs.iter().enumerate() {
            if parent >> f & 1 == 1 {
                m |= 1 << idx;
            }
        }
        m
    }

    /// Index of the pair (e, copy), if present.
    pub fn pair_index(&self, e: usize, copy: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (e, copy))
    }

    /// Per-element copy counts of a mask, indexed by parent element.
    pub fn counts(&self, x: EMask) -> Vec<u64> {
        let mut out = vec![0u64; self.parent_n()];
        for (idx, &(e, _)) in self.pairs.iter().enumerate() {
            if x >> idx & 1 == 1 {
                out[e] += 1;
            }
        }
        out
    }
}

/// How an expansion matroid answers rank queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankOracle {
    /// Dense table indexed by pair mask.
    Table(Vec<u64>),
    /// Free expansion of a polymatroid, ranked by the greedy criterion.
    Free(Polymatroid),
    /// Combinatorial type of a family of c-dimensional subspaces.
    Pieces { subspaces: Vec<Subspace>, c: usize },
}

/// A matroid on an expanded ground set, given by a rank oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionMatroid {
    pub ground: ExpandedGround,
    pub oracle: RankOracle,
}

/// Independence in the free expansion of g: for every parent subset F,
/// the number of selected copies within F is at most g(F). Subsets F
/// missing a selected element never bind (monotonicity), so F ranges
/// over the elements present in x.
fn free_independent(g: &Polymatroid, ground: &ExpandedGround, x: EMask) -> bool {
    let counts = ground.counts(x);
    let present: Vec<usize> = (0..counts.len()).filter(|&e| counts[e] > 0).collect();
    for fsel in 0..(1u32 << present.len()) {
        let mut parent: Mask = 0;
        let mut total = 0u64;
        for (j, &e) in present.iter().enumerate() {
            if fsel >> j & 1 == 1 {
                parent |= 1 << e;
                total += counts[e];
            }
        }
        if total > g.g(parent) {
            return false;
        }
    }
    true
}

impl ExpansionMatroid {
    /// The free expansion F(g).
    pub fn free(g: &Polymatroid) -> Result<Self, ExpansionError> {
        let ground = ExpandedGround::from_polymatroid(g)?;
        Ok(ExpansionMatroid { ground, oracle: RankOracle::Free(g.clone()) })
    }

    /// Rank of a pair mask.
    pub fn rank(&self, x: EMask) -> Result<u64, ExpansionError> {
        if u64::from(x) >= 1u64 << self.ground.len() {
            return Err(ExpansionError::PreconditionViolation(format!(
                "mask {x:#x} outside the expanded ground"
            )));
        }
        match &self.oracle {
            RankOracle::Table(t) => Ok(t[x as usize]),
            RankOracle::Free(g) => {
                // greedy is valid because the free expansion is a matroid
                let mut acc: EMask = 0;
                for idx in 0..self.ground.len() {
                    if x >> idx & 1 == 1 && free_independent(g, &self.ground, acc | 1 << idx) {
                        acc |= 1 << idx;
                    }
                }
                Ok(u64::from(acc.count_ones()))
            }
            RankOracle::Pieces { subspaces, c } => {
                if x == 0 {
                    return Ok(0);
                }
                let mut parts: Vec<&Subspace> = Vec::new();
                for (idx, s) in subspaces.iter().enumerate() {
                    if x >> idx & 1 == 1 {
                        parts.push(s);
                    }
                }
                let (field, ambient) = (parts[0].field(), parts[0].ambient_dim());
                let d = crate::exactla::sum_dim(field, ambient, parts.iter().copied())?;
                if d % c != 0 {
                    return Err(ExpansionError::NotCAdmissible(format!(
                        "sum over mask {x:#x} has dimension {d}, not a multiple of {c}"
                    )));
                }
                Ok((d / c) as u64)
            }
        }
    }

    pub fn independent(&self, x: EMask) -> Result<bool, ExpansionError> {
        Ok(self.rank(x)? == u64::from(x.count_ones()))
    }

    /// Materializes the dense rank table (small grounds only).
    pub fn to_table(&self) -> Result<Self, ExpansionError> {
        let n = self.ground.len();
        if n > 20 {
            return Err(ExpansionError::TooLarge(format!(
                "cannot tabulate {n} pairs"
            )));
        }
        let mut table = Vec::with_capacity(1 << n);
        for x in 0..(1u64 << n) as EMask {
            table.push(self.rank(x)?);
        }
        Ok(ExpansionMatroid { ground: self.ground.clone(), oracle: RankOracle::Table(table) })
    }

    /// Exhaustive matroid rank axioms: normalization, unit increase,
    /// monotonicity, pairwise submodularity.
    pub fn validate(&self) -> Result<(), ExpansionError> {
        let n = self.ground.len();
        if n > MAX_EXHAUSTIVE {
            return Err(ExpansionError::TooLarge(format!(
                "exhaustive axiom check limited to {MAX_EXHAUSTIVE} pairs, got {n}"
            )));
        }
        let tabled = self.to_table()?;
        let t = match &tabled.oracle {
            RankOracle::Table(t) => t,
            _ => unreachable!(),
        };
        if t[0] != 0 {
            return Err(ExpansionError::NotAnExpansion("rank(∅) ≠ 0".into()));
        }
        for x in 0..(1u64 << n) as EMask {
            for i in 0..n {
                if x >> i & 1 == 1 {
                    continue;
                }
                let xi = x | 1 << i;
                let (rx, rxi) = (t[x as usize], t[xi as usize]);
                if rxi < rx || rxi > rx + 1 {
                    return Err(ExpansionError::NotAnExpansion(format!(
                        "unit-increase axiom fails at {x:#x} + pair {i}"
                    )));
                }
                for j in (i + 1)..n {
                    if x >> j & 1 == 1 {
                        continue;
                    }
                    let xj = x | 1 << j;
                    let xij = xi | 1 << j;
                    if t[xi as usize] + t[xj as usize] < t[xij as usize] + rx {
                        return Err(ExpansionError::NotAnExpansion(format!(
                            "submodularity fails at {x:#x} with pairs {i}, {j}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rank of x in the free expansion F(g).
pub fn free_expansion_rank(g: &Polymatroid, x: EMask) -> Result<u64, ExpansionError> {
    ExpansionMatroid::free(g)?.rank(x)
}

/// Is n an expansion of g: matching multiplicities, and every parent
/// subset's full block set has rank g(S). Exhaustive over S ⊆ E.
pub fn is_expansion(n: &ExpansionMatroid, g: &Polymatroid) -> Result<bool, ExpansionError> {
    let mults = n.ground.multiplicities();
    let gm: Vec<u64> = (0..g.n).map(|e| g.g(1 << e)).collect();
    if mults != gm {
        return Err(ExpansionError::MultiplicityMismatch(format!(
            "ground has multiplicities {mults:?}, polymatroid has {gm:?}"
        )));
    }
    for s in 0..(1u64 << g.n) as Mask {
        if n.rank(n.ground.blocks_of(s))? != g.g(s) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is every independent set of n1 independent in n2 (same ground)?
pub fn is_weak_image(n1: &ExpansionMatroid, n2: &ExpansionMatroid) -> Result<bool, ExpansionError> {
    if n1.ground != n2.ground {
        return Err(ExpansionError::GroundMismatch);
    }
    let n = n1.ground.len();
    if n > MAX_EXHAUSTIVE {
        return Err(ExpansionError::TooLarge(format!(
            "exhaustive weak-image check limited to {MAX_EXHAUSTIVE} pairs, got {n}"
        )));
    }
    for x in 0..(1u64 << n) as EMask {
        if n1.independent(x)? && !n2.independent(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// c-admissibility of a family of subspaces: every subset-sum dimension
/// is divisible by c. Exhaustive up to [`MAX_EXHAUSTIVE`] members, else
/// sampled. Returns the first violating mask, if any.
pub fn c_admissibility_violation(
    subspaces: &[Subspace],
    c: usize,
    seed: u64,
) -> Result<Option<u64>, ExpansionError> {
    if c == 0 {
        return Err(ExpansionError::PreconditionViolation("c must be positive".into()));
    }
    let n = subspaces.len();
    let masks: Vec<u64> = if n <= MAX_EXHAUSTIVE {
        (0..(1u64 << n)).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<u64> = (0..n as u64).map(|i| 1 << i).collect();
        for _ in 0..ADMISSIBILITY_SAMPLES {
            let mut m = 0u64;
            for i in 0..n {
                if rng.gen_bool(0.5) {
                    m |= 1 << i;
                }
            }
            out.push(m);
        }
        out
    };
    if n == 0 {
        return Ok(None);
    }
    let (field, ambient) = (subspaces[0].field(), subspaces[0].ambient_dim());
    for m in masks {
        let parts: Vec<&Subspace> = (0..n).filter(|&i| m >> i & 1 == 1).map(|i| &subspaces[i]).collect();
        if crate::exactla::sum_dim(field, ambient, parts.iter().copied())? % c != 0 {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// A c-basis: per parent element, dim(U_e)/c generic c-dimensional
/// pieces summing back to U_e, forming a c-arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CBasis {
    pub ground: ExpandedGround,
    pub pieces: Vec<Subspace>,
    pub c: usize,
    pub parent: Arrangement,
}

impl CBasis {
    /// Re-checks the defining invariants: piece dimensions, per-element
    /// reconstruction, and (sampled/exhaustive) c-admissibility.
    pub fn validate(&self, seed: u64) -> Result<(), ExpansionError> {
        if self.pieces.len() != self.ground.len() {
            return Err(ExpansionError::PreconditionViolation(
                "piece count does not match the expanded ground".into(),
            ));
        }
        for p in &self.pieces {
            if p.dim() != self.c {
                return Err(ExpansionError::PreconditionViolation(format!(
                    "piece of dimension {} in a {}-basis",
                    p.dim(),
                    self.c
                )));
            }
        }
        for e in 0..self.parent.n() {
            let block = self.ground.block_mask(e);
            let parts: Vec<&Subspace> = (0..self.pieces.len())
                .filter(|&i| block >> i & 1 == 1)
                .map(|i| &self.pieces[i])
                .collect();
            let span = if parts.is_empty() {
                Subspace::zero(self.parent.field, self.parent.ambient)
            } else {
                let mut acc = parts[0].clone();
                for p in &parts[1..] {
                    acc = crate::exactla::subspace_sum(&acc, p)?;
                }
                acc
            };
            if span != self.parent.subspaces[e] {
                return Err(ExpansionError::PreconditionViolation(format!(
                    "pieces of element {e} do not sum to the parent subspace"
                )));
            }
        }
        if let Some(m) = c_admissibility_violation(&self.pieces, self.c, seed)? {
            return Err(ExpansionError::NotCAdmissible(format!(
                "piece subset {m:#x} has dimension not divisible by {}",
                self.c
            )));
        }
        Ok(())
    }

    /// The matroid given by the normalized ranks of the pieces.
    pub fn combinatorial_type(&self) -> ExpansionMatroid {
        ExpansionMatroid {
            ground: self.ground.clone(),
            oracle: RankOracle::Pieces { subspaces: self.pieces.clone(), c: self.c },
        }
    }
}

/// The polymatroid X ↦ dim(U_X)/c of a c-admissible arrangement, with
/// the divisor passed explicitly (it need not be the arrangement's own
/// homogeneity parameter, e.g. for doubles).
pub fn normalized_polymatroid(u: &Arrangement, c: usize) -> Result<Polymatroid, ExpansionError> {
    if c == 0 {
        return Err(ExpansionError::PreconditionViolation("c must be positive".into()));
    }
    let n = u.n();
    let mut table = Vec::with_capacity(1 << n);
    for x in 0..(1u64 << n) as Mask {
        let d = u.dim_of(x);
        if d % c != 0 {
            return Err(ExpansionError::NotCAdmissible(format!(
                "dim(U_{x:#x}) = {d} not divisible by {c}"
            )));
        }
        table.push((d / c) as u64);
    }
    let labels = (0..n).map(|e| format!("e{e}")).collect();
    Ok(Polymatroid { n, table, labels })
}

/// Draws per-element generic pieces; `special` overrides chosen pairs.
fn draw_pieces(
    u: &Arrangement,
    ground: &ExpandedGround,
    c: usize,
    special: &[(usize, Subspace)],
    seed: u64,
) -> Result<Vec<Subspace>, ExpansionError> {
    let mut pieces = Vec::with_capacity(ground.len());
    for (idx, &(e, _)) in ground.pairs.iter().enumerate() {
        if let Some((_, s)) = special.iter().find(|&&(i, _)| i == idx) {
            pieces.push(s.clone());
        } else {
            pieces.push(random_generic_subspace(
                &u.subspaces[e],
                c,
                seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(idx as u64 + 1)),
            )?);
        }
    }
    Ok(pieces)
}

/// Verifies a candidate piece family: reconstruction and c-admissibility.
fn pieces_ok(
    u: &Arrangement,
    ground: &ExpandedGround,
    pieces: &[Subspace],
    c: usize,
    seed: u64,
) -> Result<bool, ExpansionError> {
    for e in 0..u.n() {
        let block = ground.block_mask(e);
        let parts: Vec<&Subspace> =
            (0..pieces.len()).filter(|&i| block >> i & 1 == 1).map(|i| &pieces[i]).collect();
        let d = crate::exactla::sum_dim(u.field, u.ambient, parts.iter().copied())?;
        if d != u.subspaces[e].dim() {
            return Ok(false);
        }
    }
    Ok(c_admissibility_violation(pieces, c, seed)?.is_none())
}

/// A generic c-basis of a c-admissible arrangement.
pub fn generic_c_basis(u: &Arrangement, c: usize, seed: u64) -> Result<CBasis, ExpansionError> {
    for (e, s) in u.subspaces.iter().enumerate() {
        if s.dim() % c != 0 {
            return Err(ExpansionError::NotCAdmissible(format!(
                "dim(U_{e}) = {} not divisible by {c}",
                s.dim()
            )));
        }
    }
    if let Some(m) = c_admissibility_violation(&u.subspaces, c, seed ^ 0x5a5a)? {
        return Err(ExpansionError::NotCAdmissible(format!(
            "input subset {m:#x} has dimension not divisible by {c}"
        )));
    }
    let mults: Vec<u64> = u.subspaces.iter().map(|s| (s.dim() / c) as u64).collect();
    let ground = ExpandedGround::from_multiplicities(&mults)?;
    for attempt in 0..MAX_RETRIES {
        let s = seed.wrapping_add(attempt);
        let pieces = draw_pieces(u, &ground, c, &[], s)?;
        if pieces_ok(u, &ground, &pieces, c, s ^ 0xc0de)? {
            return Ok(CBasis { ground, pieces, c, parent: u.clone() });
        }
    }
    Err(ExpansionError::GenericityFailure(format!(
        "no generic c-basis found after {MAX_RETRIES} attempts"
    )))
}

/// The separation predicate on an expansion n of the doubled polymatroid
/// g2: rank({(x,1)} ∪ all copies of b^(1), b^(2)) = 4 and
/// rank({(x,1)} ∪ all copies of y) = g2(y) + 1. By the shared layout
/// convention, b^(1) and b^(2) are elements 0 and 1.
pub fn separates(
    n: &ExpansionMatroid,
    x: usize,
    y: usize,
    g2: &Polymatroid,
) -> Result<bool, ExpansionError> {
    if !is_expansion(n, g2)? {
        return Err(ExpansionError::NotAnExpansion(
            "separation is only defined on expansions of the doubled polymatroid".into(),
        ));
    }
    let x1 = n.ground.pair_index(x, 1).ok_or_else(|| {
        ExpansionError::PreconditionViolation(format!("element {x} has no copies"))
    })?;
    let cond1_mask = (1 << x1) | n.ground.block_mask(0) | n.ground.block_mask(1);
    if n.rank(cond1_mask)? != 4 {
        return Ok(false);
    }
    let dy = g2.g(1 << y);
    let cond2_mask = (1 << x1) | n.ground.block_mask(y);
    Ok(n.rank(cond2_mask)? == dy + 1)
}

/// The separating c-basis of a doubled, well-separated arrangement: the
/// first copy of x is generic inside A_x = W_x ∩ (W_{b1} + W_{b2}), all
/// other copies are generic in their parents. c is half the input's
/// homogeneity parameter (the input must be a double).
pub fn separating_basis(
    w: &ExtensionArrangement,
    x: usize,
    seed: u64,
) -> Result<CBasis, ExpansionError> {
    let c2 = w.arr.c;
    if c2 % 2 != 0 {
        return Err(ExpansionError::PreconditionViolation(format!(
            "homogeneity parameter {c2} is odd; the input must be a double"
        )));
    }
    let c = c2 / 2;
    let m = &w.matroid;
    let [b1, b2, _] = m.basis;
    if x == b1 || x == b2 || m.rank(1 << b1 | 1 << b2 | 1 << x)? != 2 {
        return Err(ExpansionError::PreconditionViolation(format!(
            "element {x} is not a bottom element (not on the b1-b2 line)"
        )));
    }
    let n_parent = m.n();
    let sep_check: Vec<Mask> = if n_parent <= 12 {
        (0..(1u64 << n_parent) as Mask).collect()
    } else {
        crate::inflation::probe_subsets(n_parent, seed ^ 0x5e9a_4a7e, 64)
    };
    if !is_well_separated_on(w, x, &sep_check)? {
        return Err(ExpansionError::NotWellSeparated(x));
    }
    for (e, s) in w.arr.subspaces.iter().enumerate() {
        if s.dim() % c != 0 {
            return Err(ExpansionError::NotCAdmissible(format!(
                "dim(W_{e}) = {} not divisible by c = {c}",
                s.dim()
            )));
        }
    }
    let mults: Vec<u64> = w.arr.subspaces.iter().map(|s| (s.dim() / c) as u64).collect();
    let ground = ExpandedGround::from_multiplicities(&mults)?;
    let x1 = ground.pair_index(x, 1).ok_or_else(|| {
        ExpansionError::PreconditionViolation(format!("element {x} has no copies"))
    })?;
    let bottom_line = crate::exactla::subspace_sum(&w.arr.subspaces[b1], &w.arr.subspaces[b2])?;
    let ax = crate::exactla::subspace_intersect(&w.arr.subspaces[x], &bottom_line)?;
    if ax.dim() < c {
        return Err(ExpansionError::PreconditionViolation(format!(
            "A_x has dimension {} < c = {c}",
            ax.dim()
        )));
    }
    // the bottom elements y ≠ x with A_x ≠ A_y that the result must separate
    let wb = w.basis_space();
    let ax_in_b = crate::exactla::subspace_intersect(&w.arr.subspaces[x], &wb)?;
    let mut targets = Vec::new();
    for y in 0..n_parent {
        if y == x || m.basis.contains(&y) || m.rank(1 << b1 | 1 << b2 | 1 << y)? != 2 {
            continue;
        }
        let ay = crate::exactla::subspace_intersect(&w.arr.subspaces[y], &wb)?;
        if ay != ax_in_b {
            targets.push(y);
        }
    }
    let g2 = if n_parent <= 12 {
        Some(normalized_polymatroid(&w.arr, c)?)
    } else {
        None
    };
    for attempt in 0..MAX_RETRIES {
        let s = seed.wrapping_add(attempt);
        let wx1 = random_generic_subspace(&ax, c, s ^ 0xface)?;
        let pieces = draw_pieces(&w.arr, &ground, c, &[(x1, wx1)], s)?;
        if !pieces_ok(&w.arr, &ground, &pieces, c, s ^ 0xc0de)? {
            continue;
        }
        let cb = CBasis { ground: ground.clone(), pieces, c, parent: w.arr.clone() };
        let n = cb.combinatorial_type();
        let mut all_sep = true;
        for &y in &targets {
            let sep = match &g2 {
                Some(g2) => separates(&n, x, y, g2)?,
                None => {
                    // large parent ground: check the two rank equations
                    // directly without tabulating the doubled polymatroid
                    let cond1 = (1 << x1) | ground.block_mask(0) | ground.block_mask(1);
                    let cond2 = (1 << x1) | ground.block_mask(y);
                    let dy = (w.arr.subspaces[y].dim() / c) as u64;
                    n.rank(cond1)? == 4 && n.rank(cond2)? == dy + 1
                }
            };
            if !sep {
                all_sep = false;
                break;
            }
        }
        if all_sep {
            return Ok(cb);
        }
    }
    Err(ExpansionError::GenericityFailure(format!(
        "no separating c-basis found after {MAX_RETRIES} attempts"
    )))
}

/// Brute-force enumeration of the expansions of g realizable by vector
/// (c = 1) arrangements over GF(p), for micro instances. Returns the
/// distinct combinatorial types as rank tables.
pub fn bruteforce_expansions_1arr(
    g: &Polymatroid,
    p: u64,
) -> Result<Vec<ExpansionMatroid>, ExpansionError> {
    let ground = ExpandedGround::from_polymatroid(g)?;
    let total = ground.len();
    let dim = g.g(g.full_mask()) as usize;
    if total > 6 || dim > 3 || p > 5 {
        return Err(ExpansionError::TooLarge(format!(
            "brute force limited to 6 pairs, ambient 3, p ≤ 5 (got {total}, {dim}, {p})"
        )));
    }
    let field = crate::exactla::PrimeField::new(p)?;
    if total == 0 {
        return Ok(vec![ExpansionMatroid {
            ground,
            oracle: RankOracle::Table(vec![0]),
        }]);
    }
    // projective points: nonzero vectors with first nonzero entry 1
    let mut points: Vec<Vec<u64>> = Vec::new();
    let mut v = vec![0u64; dim];
    loop {
        // advance odometer
        let mut i = 0;
        loop {
            if i == dim {
                break;
            }
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
        if let Some(first) = v.iter().position(|&a| a != 0) {
            if v[first] == 1 {
                points.push(v.clone());
            }
        }
    }
    let rank_of = |assignment: &[usize], mask: EMask| -> Result<usize, ExpansionError> {
        let cols: Vec<&Vec<u64>> = (0..assignment.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| &points[assignment[i]])
            .collect();
        if cols.is_empty() {
            return Ok(0);
        }
        let mut mat = Matrix::zero(field, dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &a) in col.iter().enumerate() {
                mat.set(i, j, a);
            }
        }
        Ok(mat_rank(&mat))
    };
    let parent_n = g.n;
    let mut types = std::collections::BTreeSet::new();
    let mut assignment: Vec<usize> = Vec::new();
    // backtracking over point choices per pair, pruning on block ranks
    fn search(
        assignment: &mut Vec<usize>,
        total: usize,
        npoints: usize,
        parent_n: usize,
        g: &Polymatroid,
        ground: &ExpandedGround,
        rank_of: &dyn Fn(&[usize], EMask) -> Result<usize, ExpansionError>,
        types: &mut std::collections::BTreeSet<Vec<u64>>,
    ) -> Result<(), ExpansionError> {
        if assignment.len() == total {
            // complete: require exact block ranks for every parent subset
            for s in 0..(1u64 << parent_n) as Mask {
                let blocks = ground.blocks_of(s);
                if rank_of(assignment, blocks)? as u64 != g.g(s) {
                    return Ok(());
                }
            }
            let mut table = Vec::with_capacity(1 << total);
            for mask in 0..(1u64 << total) as EMask {
                table.push(rank_of(assignment, mask)? as u64);
            }
            types.insert(table);
            return Ok(());
        }
        let assigned_mask = ((1u64 << assignment.len()) - 1) as EMask;
        for pt in 0..npoints {
            assignment.push(pt);
            // prune: no partially assigned block set may exceed its bound
            let mut ok = true;
            for s in 0..(1u64 << parent_n) as Mask {
                let blocks = ground.blocks_of(s) & (assigned_mask | 1 << (assignment.len() - 1));
                if rank_of(assignment, blocks)? as u64 > g.g(s) {
                    ok = false;
                    break;
                }
            }
            if ok {
                search(assignment, total, npoints, parent_n, g, ground, rank_of, types)?;
            }
            assignment.pop();
        }
        Ok(())
    }
    search(
        &mut assignment,
        total,
        points.len(),
        parent_n,
        g,
        &ground,
        &rank_of,
        &mut types,
    )?;
    Ok(types
        .into_iter()
        .map(|table| ExpansionMatroid { ground: ground.clone(), oracle: RankOracle::Table(table) })
        .collect())
}

//! Rank-3 triangle matroids and integer polymatroids.
//!
//! Subsets of a ground set of at most 24 elements are bitmasks (bit i =
//! element id i). Polymatroids are dense integer tables over the power set,
//! so every predicate here is checked exhaustively.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Hard cap on ground-set size; keeps every power-set scan exhaustive.
pub const MAX_GROUND: usize = 24;

/// A subset of the ground set, bit i = element id i.
pub type Mask = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
    #[error("not a polymatroid: {0}")]
    NotAPolymatroid(String),
    #[error("ground sets do not match")]
    GroundSetMismatch,
    #[error("ground set of size {0} exceeds the cap of {MAX_GROUND}")]
    GroundSetTooLarge(usize),
    #[error("unknown element in subset mask {0:#x}")]
    UnknownElement(Mask),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}

/// Label of a ground element; sides live in {1,2,3}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementLabel {
    Basis { side: u8 },
    Identity { side: u8 },
    Generator { name: String, inverted: bool, side: u8 },
}

impl fmt::Display for ElementLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementLabel::Basis { side } => write!(f, "b^({side})"),
            ElementLabel::Identity { side } => write!(f, "e^({side})"),
            ElementLabel::Generator { name, inverted, side } => {
                if *inverted {
                    write!(f, "{name}^-1({side})")
                } else {
                    write!(f, "{name}^({side})")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundElement {
    pub id: usize,
    pub label: ElementLabel,
}

/// A rank-3 triangle matroid: distinguished basis B plus the list of
/// dependent rank-2 flats. Validated by [`TriangleMatroid::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleMatroid {
    pub elements: Vec<GroundElement>,
    /// The distinguished basis triple (b^(1), b^(2), b^(3)), by element id.
    pub basis: [usize; 3],
    /// Dependent rank-2 flats as element-id bitmasks.
    pub flats2: Vec<Mask>,
}

impl TriangleMatroid {
    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn full_mask(&self) -> Mask {
        ((1u64 << self.n()) - 1) as Mask
    }

    pub fn basis_mask(&self) -> Mask {
        self.basis.iter().map(|&b| 1 << b).sum()
    }

    fn check_mask(&self, x: Mask) -> Result<(), MatroidError> {
        if x & !self.full_mask() != 0 {
            return Err(MatroidError::UnknownElement(x));
        }
        Ok(())
    }

    /// Checks all triangle-matroid invariants.
    ///
    /// Every non-basis element must lie on a flat containing exactly two
    /// basis elements, distinct flats may share at most one element, and no
    /// flat contains the whole basis.
    pub fn validate(&self) -> Result<(), MatroidError> {
        let n = self.n();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        for (i, e) in self.elements.iter().enumerate() {
            if e.id != i {
                return Err(MatroidError::NotAMatroid(format!(
                    "element ids must be consecutive from 0; found {} at index {i}",
                    e.id
                )));
            }
        }
        let mut labels: Vec<&ElementLabel> = self.elements.iter().map(|e| &e.label).collect();
        labels.sort_by_key(|l| format!("{l}"));
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(MatroidError::NotAMatroid("duplicate element labels".into()));
        }
        let bmask = self.basis_mask();
        if bmask.count_ones() != 3 {
            return Err(MatroidError::NotAMatroid("basis must be three distinct elements".into()));
        }
        for f in &self.flats2 {
            self.check_mask(*f)?;
            if (f & bmask).count_ones() > 2 || f & bmask == bmask {
                return Err(MatroidError::NotAMatroid(format!(
                    "flat {f:#x} contains more than two basis elements"
                )));
            }
        }
        for (i, f) in self.flats2.iter().enumerate() {
            for g in &self.flats2[i + 1..] {
                if (f & g).count_ones() >= 2 {
                    return Err(MatroidError::NotAMatroid(format!(
                        "flats {f:#x} and {g:#x} share two elements"
                    )));
                }
            }
        }
        for e in &self.elements {
            let bit = 1u32 << e.id;
            if bit & bmask != 0 {
                continue;
            }
            let on_basis_line = self
                .flats2
                .iter()
                .any(|f| f & bit != 0 && (f & bmask).count_ones() == 2);
            if !on_basis_line {
                return Err(MatroidError::NotAMatroid(format!(
                    "element {} ({}) lies on no basis line",
                    e.id, e.label
                )));
            }
        }
        Ok(())
    }

    /// Rank of a subset, by the flat rule for rank-3 matroids.
    pub fn rank(&self, x: Mask) -> Result<u32, MatroidError> {
        self.check_mask(x)?;
        Ok(match x.count_ones() {
            0 => 0,
            1 => 1,
            2 => 2,
            _ => {
                if self.flats2.iter().any(|f| x & !f == 0) {
                    2
                } else {
                    3
                }
            }
        })
    }

    /// Closure of a subset: all elements whose addition keeps the rank.
    pub fn closure(&self, x: Mask) -> Result<Mask, MatroidError> {
        let r = self.rank(x)?;
        let mut cl = 0;
        for e in 0..self.n() {
            if self.rank(x | (1 << e))? == r {
                cl |= 1 << e;
            }
        }
        Ok(cl)
    }

    /// C_M(S): the unique subset D of the basis with cl(D) = cl(S), if any.
    ///
    /// Callers that plug this into rank formulas map `None` to the empty
    /// set; `None` is kept distinct for diagnostics.
    pub fn c_m(&self, s: Mask) -> Result<Option<Mask>, MatroidError> {
        let cl_s = self.closure(s)?;
        let b: Vec<usize> = self.basis.to_vec();
        for dbits in 0..8u32 {
            let d: Mask = (0..3).filter(|&i| dbits >> i & 1 == 1).map(|i| 1 << b[i]).sum();
            if self.closure(d)? == cl_s {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// C_M(S), with None mapped to the empty set.
    pub fn c_m_or_empty(&self, s: Mask) -> Result<Mask, MatroidError> {
        Ok(self.c_m(s)?.unwrap_or(0))
    }

    /// The matroid rank function as a dense polymatroid table.
    pub fn rank_table(&self) -> Result<Polymatroid, MatroidError> {
        let n = self.n();
        let mut table = Vec::with_capacity(1 << n);
        for x in 0..(1u32 << n) {
            table.push(self.rank(x)? as u64);
        }
        Ok(Polymatroid {
            n,
            table,
            labels: self.elements.iter().map(|e| e.label.to_string()).collect(),
        })
    }
}

/// An integer polymatroid as a dense rank table over the power set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polymatroid {
    pub n: usize,
    /// table[mask] = g(mask); length 2^n.
    pub table: Vec<u64>,
    pub labels: Vec<String>,
}

impl Polymatroid {
    pub fn g(&self, x: Mask) -> u64 {
        self.table[x as usize]
    }

    pub fn full_mask(&self) -> Mask {
        ((1u64 << self.n) - 1) as Mask
    }

    /// Checks the polymatroid axioms.
    ///
    /// Monotonicity and submodularity are verified in their single-element
    /// local forms, which are equivalent to the subset-pair axioms.
    pub fn validate(&self) -> Result<(), MatroidError> {
        if self.n > MAX_GROUND {
            return Err(MatroidError::GroundSetTooLarge(self.n));
        }
        if self.table.len() != 1 << self.n {
            return Err(MatroidError::NotAPolymatroid(format!(
                "table has {} entries, expected {}",
                self.table.len(),
                1u64 << self.n
            )));
        }
        if self.table[0] != 0 {
            return Err(MatroidError::NotAPolymatroid("g(empty set) != 0".into()));
        }
        for x in 0..(1u32 << self.n) {
            for i in 0..self.n {
                if x >> i & 1 == 1 {
                    continue;
                }
                let xi = x | (1 << i);
                if self.g(xi) < self.g(x) {
                    return Err(MatroidError::NotAPolymatroid(format!(
                        "monotonicity fails at ({x:#x}, element {i})"
                    )));
                }
                for j in (i + 1)..self.n {
                    if x >> j & 1 == 1 {
                        continue;
                    }
                    let xj = x | (1 << j);
                    if self.g(xi) + self.g(xj) < self.g(xi | xj) + self.g(x) {
                        return Err(MatroidError::NotAPolymatroid(format!(
                            "submodularity fails at ({x:#x}, elements {i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pointwise double; models the doubled polymatroid 2g.
    pub fn double(&self) -> Polymatroid {
        Polymatroid {
            n: self.n,
            table: self.table.iter().map(|&v| 2 * v).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// The extension identity (*): g(C)+g(S)-g(S∪C) = r(C)+r(S)-r(S∪C) for all
/// C ⊆ B and S ⊆ E, checked exhaustively.
pub fn is_extension_poly(g: &Polymatroid, m: &TriangleMatroid) -> Result<bool, MatroidError> {
    if g.n != m.n() {
        return Err(MatroidError::GroundSetMismatch);
    }
    let b: Vec<Mask> = submasks(m.basis_mask());
    for s in 0..(1u32 << g.n) {
        for &c in &b {
            let lhs = g.g(c) as i64 + g.g(s) as i64 - g.g(s | c) as i64;
            let rhs = m.rank(c)? as i64 + m.rank(s)? as i64 - m.rank(s | c)? as i64;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All submasks of a mask, ascending.
pub fn submasks(mask: Mask) -> Vec<Mask> {
    let mut out = vec![0];
    let mut s = mask;
    loop {
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
        if s == 0 {
            break;
        }
        out.push(s);
    }
    if mask != 0 {
        out.push(mask);
    }
    out.sort_unstable();
    out
}

/// Combinatorial inflation I_comb(g, S).
///
/// For T disjoint from S: g'(T∪Z) = g(T∪Z) + 2|Z| when Z ⊊ S, and
/// g'(T∪S) = g(T∪S∪C_M(S)) + 2|S| − 1.
pub fn comb_inflate(
    g: &Polymatroid,
    m: &TriangleMatroid,
    s: Mask,
) -> Result<Polymatroid, MatroidError> {
    if g.n != m.n() {
        return Err(MatroidError::GroundSetMismatch);
    }
    m.check_mask(s)?;
    if s == 0 || s & m.basis_mask() != 0 {
        return Err(MatroidError::PreconditionViolation(
            "inflation subset must be nonempty and disjoint from the basis".into(),
        ));
    }
    if !is_extension_poly(g, m)? {
        return Err(MatroidError::PreconditionViolation(
            "input polymatroid does not extend the matroid".into(),
        ));
    }
    let c_m = m.c_m_or_empty(s)?;
    let two_s = 2 * s.count_ones() as u64;
    let mut table = Vec::with_capacity(g.table.len());
    for x in 0..(1u32 << g.n) {
        let z = x & s;
        let v = if z == s {
            g.g(x | c_m) + two_s - 1
        } else {
            g.g(x) + 2 * z.count_ones() as u64
        };
        table.push(v);
    }
    let out = Polymatroid { n: g.n, table, labels: g.labels.clone() };
    out.validate()?;
    if !is_extension_poly(&out, m)? {
        return Err(MatroidError::NotAPolymatroid(
            "inflated table no longer extends the matroid".into(),
        ));
    }
    Ok(out)
}

/// A linear order on the subsets of E∖B refining inclusion; masks are over
/// the full ground set, starting with the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetOrder {
    pub order: Vec<Mask>,
}

impl SubsetOrder {
    pub fn validate(&self) -> Result<(), MatroidError> {
        if self.order.first() != Some(&0) {
            return Err(MatroidError::PreconditionViolation(
                "subset order must start with the empty set".into(),
            ));
        }
        for (i, &si) in self.order.iter().enumerate() {
            for &sj in &self.order[i + 1..] {
                if sj & !si == 0 {
                    return Err(MatroidError::PreconditionViolation(format!(
                        "order does not refine inclusion: {sj:#x} after its superset {si:#x}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Deterministic inclusion-refining order on subsets of E∖B: sorted by
/// (cardinality, numeric bitmask).
pub fn build_subset_order(m: &TriangleMatroid) -> SubsetOrder {
    let free = m.full_mask() & !m.basis_mask();
    let mut order = submasks(free);
    order.sort_by_key(|&x| (x.count_ones(), x));
    SubsetOrder { order }
}

/// Runs the combinatorial pipeline g_0 = r, g_{i+1} = I_comb(g_i, S_{i+1}),
/// skipping the initial empty set; returns g_0..g_k.
pub fn full_comb_pipeline(
    m: &TriangleMatroid,
    order: &SubsetOrder,
    max_steps: Option<usize>,
) -> Result<Vec<Polymatroid>, MatroidError> {
    order.validate()?;
    let mut out = vec![m.rank_table()?];
    let steps: Vec<Mask> = order.order.iter().copied().filter(|&s| s != 0).collect();
    let k = max_steps.unwrap_or(steps.len()).min(steps.len());
    for &s in &steps[..k] {
        let next = comb_inflate(out.last().unwrap(), m, s)?;
        out.push(next);
    }
    Ok(out)
}

/// The contraction identity g(D∪S∪C_M(S)) = g(S∪B) − g(B) + r(D∪S) for all
/// D ⊆ B and S ⊆ E∖B, checked exhaustively.
pub fn contraction_identity_check(
    g: &Polymatroid,
    m: &TriangleMatroid,
) -> Result<bool, MatroidError> {
    if !is_extension_poly(g, m)? {
        return Err(MatroidError::PreconditionViolation(
            "polymatroid does not extend the matroid".into(),
        ));
    }
    let bmask = m.basis_mask();
    let free = m.full_mask() & !bmask;
    for s in submasks(free) {
        let c_m = m.c_m_or_empty(s)?;
        for d in submasks(bmask) {
            let lhs = g.g(d | s | c_m) as i64;
            let rhs = g.g(s | bmask) as i64 - g.g(bmask) as i64 + m.rank(d | s)? as i64;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The canonical small fixture: basis b1, b2, b3 plus two bottom elements
/// x, y on the line spanned by b1, b2. Element ids: b1=0, b2=1, b3=2, x=3,
/// y=4; the single dependent flat is {b1, b2, x, y}.
pub fn toy_matroid() -> TriangleMatroid {
    let elements = vec![
        GroundElement { id: 0, label: ElementLabel::Basis { side: 1 } },
        GroundElement { id: 1, label: ElementLabel::Basis { side: 2 } },
        GroundElement { id: 2, label: ElementLabel::Basis { side: 3 } },
        GroundElement {
            id: 3,
            label: ElementLabel::Generator { name: "x".into(), inverted: false, side: 1 },
        },
        GroundElement {
            id: 4,
            label: ElementLabel::Generator { name: "y".into(), inverted: false, side: 1 },
        },
    ];
    TriangleMatroid { elements, basis: [0, 1, 2], flats2: vec![0b11011] }
}

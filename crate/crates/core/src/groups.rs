//! Group presentations, normalization to length-3 relators, finite groups
//! as multiplication tables, homomorphisms, and regular representations.
//!
//! Normalization uses only Tietze transformations (free/cyclic reduction,
//! generator elimination by substitution, fresh-generator chaining), so the
//! presented group never changes. The normal form additionally guarantees
//! that no relator mentions a generator with both signs and no two relators
//! agree in two of their three positions — the shape the Dowling
//! construction needs for its flats to be well defined.

use crate::exactla::Permutation;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Order cap for finite groups; regular representations are n x n.
pub const MAX_GROUP_ORDER: usize = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("presentation cannot be encoded: {0}")]
    UnencodablePresentation(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a homomorphism: relator {0} does not map to the identity")]
    NotAHomomorphism(usize),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

/// A signed generator reference; sign is +1 or -1.
pub type Letter = (String, i32);
/// A word in the free group on the generators.
pub type Word = Vec<Letter>;

fn inv_letter(l: &Letter) -> Letter {
    (l.0.clone(), -l.1)
}

/// Free reduction: cancel adjacent x x^-1 pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for l in w {
        if let Some(last) = out.last() {
            if last.0 == l.0 && last.1 == -l.1 {
                out.pop();
                continue;
            }
        }
        out.push(l.clone());
    }
    out
}

/// Cyclic reduction: free reduction plus cancellation across the ends
/// (a conjugation, so the normal closure is unchanged).
fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut out = free_reduce(w);
    while out.len() >= 2 {
        let first = out.first().unwrap();
        let last = out.last().unwrap();
        if first.0 == last.0 && first.1 == -last.1 {
            out.pop();
            out.remove(0);
        } else {
            break;
        }
    }
    out
}

/// A finitely presented group instance together with the target word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub word: Word,
}

impl Presentation {
    pub fn validate(&self) -> Result<(), GroupError> {
        let mut sorted = self.generators.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GroupError::InvalidPresentation("duplicate generator names".into()));
        }
        let check_word = |w: &Word| -> Result<(), GroupError> {
            for (g, s) in w {
                if !self.generators.contains(g) {
                    return Err(GroupError::InvalidPresentation(format!(
                        "undeclared generator {g}"
                    )));
                }
                if *s != 1 && *s != -1 {
                    return Err(GroupError::InvalidPresentation(format!(
                        "letter sign must be +1 or -1, got {s}"
                    )));
                }
            }
            Ok(())
        };
        for r in &self.relators {
            check_word(r)?;
        }
        check_word(&self.word)
    }
}

/// A presentation whose relators all have length exactly three and whose
/// target word is a single generator (possibly recorded as inverted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<[Letter; 3]>,
    /// The target generator.
    pub word: String,
    /// True when the original word reduced to the inverse of `word`; the
    /// instance is equivalent since a word is trivial iff its inverse is.
    pub word_inverted: bool,
    /// Audit log of the Tietze moves performed.
    pub transcript: Vec<String>,
}

impl NormalizedPresentation {
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Re-checks the normal-form shape invariants.
    pub fn validate(&self) -> Result<(), GroupError> {
        if !self.generators.contains(&self.word) {
            return Err(GroupError::InvalidPresentation("word is not a declared generator".into()));
        }
        for r in &self.relators {
            for (g, s) in r {
                if !self.generators.contains(g) {
                    return Err(GroupError::InvalidPresentation(format!(
                        "undeclared generator {g} in relator"
                    )));
                }
                if *s != 1 && *s != -1 {
                    return Err(GroupError::InvalidPresentation("bad letter sign".into()));
                }
            }
            // both-signs check: collides with the cross flats downstream
            for a in 0..3 {
                for b in (a + 1)..3 {
                    if r[a].0 == r[b].0 && r[a].1 == -r[b].1 {
                        return Err(GroupError::UnencodablePresentation(format!(
                            "relator mentions {} with both signs",
                            r[a].0
                        )));
                    }
                }
            }
        }
        // two relators agreeing in two positions yield colliding flats
        for (i, r) in self.relators.iter().enumerate() {
            for r2 in &self.relators[i + 1..] {
                let agree = (0..3).filter(|&k| r[k] == r2[k]).count();
                if agree >= 2 {
                    return Err(GroupError::UnencodablePresentation(format!(
                        "relators {r:?} and {r2:?} agree in {agree} positions"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Normalizes a presentation to length-3 relators via Tietze moves.
pub fn normalize(p: &Presentation) -> Result<NormalizedPresentation, GroupError> {
    p.validate()?;
    let mut gens = p.generators.clone();
    let mut rels: Vec<Word> = p.relators.clone();
    let mut word = p.word.clone();
    let mut transcript: Vec<String> = Vec::new();
    let mut cons: HashMap<(Letter, Letter), String> = HashMap::new();
    let mut fresh_counter = 0usize;

    let fresh = |gens: &mut Vec<String>, counter: &mut usize, transcript: &mut Vec<String>| {
        loop {
            let name = format!("u{}", *counter);
            *counter += 1;
            if !gens.contains(&name) {
                gens.push(name.clone());
                transcript.push(format!("introduce fresh generator {name}"));
                return name;
            }
        }
    };

    // substitute every occurrence of generator `g` by `rep` (a word)
    fn substitute(rels: &mut [Word], word: &mut Word, g: &str, rep: &Word) {
        let apply = |w: &Word| -> Word {
            let mut out = Vec::new();
            for l in w {
                if l.0 == g {
                    if l.1 == 1 {
                        out.extend(rep.iter().cloned());
                    } else {
                        out.extend(rep.iter().rev().map(inv_letter));
                    }
                } else {
                    out.push(l.clone());
                }
            }
            out
        };
        for r in rels.iter_mut() {
            *r = apply(r);
        }
        *word = apply(word);
    }

    const MAX_ITER: usize = 10_000;
    let mut iter = 0;
    loop {
        iter += 1;
        if iter > MAX_ITER {
            return Err(GroupError::UnencodablePresentation(
                "normalization did not terminate".into(),
            ));
        }
        // reduce and drop trivial/duplicate relators
        for r in rels.iter_mut() {
            *r = cyclic_reduce(r);
        }
        rels.retain(|r| !r.is_empty());
        rels.sort();
        rels.dedup();

        // length-1 relator: the generator is trivial; eliminate it
        if let Some(pos) = rels.iter().position(|r| r.len() == 1) {
            let (g, _) = rels[pos][0].clone();
            rels.remove(pos);
            transcript.push(format!("relator of length 1: eliminate {g} = e"));
            substitute(&mut rels, &mut word, &g, &Vec::new());
            gens.retain(|x| x != &g);
            continue;
        }

        // length-2 relator
        if let Some(pos) = rels.iter().position(|r| r.len() == 2) {
            let r = rels[pos].clone();
            let ((a, sa), (b, sb)) = (r[0].clone(), r[1].clone());
            if a != b {
                // a^sa b^sb = e, so b = a^(-sa*sb): eliminate b
                rels.remove(pos);
                let rep: Word = vec![(a.clone(), -sa * sb)];
                transcript.push(format!("relator of length 2: eliminate {b} = {a}^{}", -sa * sb));
                substitute(&mut rels, &mut word, &b, &rep);
                gens.retain(|x| x != &b);
            } else {
                // a^2 = e (signs agree after cyclic reduction): squaring
                // gadget with fresh t, s forces s = a^4 and s = a^2
                rels.remove(pos);
                let t = fresh(&mut gens, &mut fresh_counter, &mut transcript);
                let s = fresh(&mut gens, &mut fresh_counter, &mut transcript);
                transcript.push(format!(
                    "square relator {a}^2: add gadget ({a},{a},{t}), ({t},{t},{s}), ({s},{a}^-1,{a}^-1)"
                ));
                rels.push(vec![(a.clone(), 1), (a.clone(), 1), (t.clone(), 1)]);
                rels.push(vec![(t.clone(), 1), (t.clone(), 1), (s.clone(), 1)]);
                rels.push(vec![(s.clone(), 1), (a.clone(), -1), (a.clone(), -1)]);
            }
            continue;
        }

        // length >= 4: one left-chaining step with hash-consing
        if let Some(pos) = rels.iter().position(|r| r.len() >= 4) {
            let r = rels[pos].clone();
            let key = (r[0].clone(), r[1].clone());
            let u = match cons.get(&key) {
                Some(u) => u.clone(),
                None => {
                    let u = fresh(&mut gens, &mut fresh_counter, &mut transcript);
                    transcript.push(format!(
                        "chain: define {u} by relator ({} {} {u}), i.e. {u} = ({}{})^-1",
                        key.0 .0, key.1 .0, key.0 .0, key.1 .0
                    ));
                    rels.push(vec![key.0.clone(), key.1.clone(), (u.clone(), 1)]);
                    cons.insert(key, u.clone());
                    u
                }
            };
            let mut rest: Word = vec![(u, -1)];
            rest.extend(r[2..].iter().cloned());
            rels[pos] = rest;
            continue;
        }

        // all relators have length 3; resolve two-position agreements
        let mut resolved = false;
        'outer: for i in 0..rels.len() {
            for j in (i + 1)..rels.len() {
                let agree: Vec<usize> = (0..3).filter(|&k| rels[i][k] == rels[j][k]).collect();
                if agree.len() == 2 {
                    // the differing letters are equal in the group: replace
                    // the second relator by that length-2 consequence
                    let k = (0..3).find(|k| !agree.contains(k)).unwrap();
                    let (a, b) = (rels[i][k].clone(), rels[j][k].clone());
                    transcript.push(format!(
                        "relators agree in two positions: replace {:?} by {}^{} {}^{}",
                        rels[j], a.0, a.1, b.0, -b.1
                    ));
                    rels[j] = vec![a, inv_letter(&b)];
                    resolved = true;
                    break 'outer;
                }
            }
        }
        if resolved {
            continue;
        }

        // relators are settled; chain the word down to a single letter
        word = free_reduce(&word);
        if word.is_empty() {
            return Err(GroupError::UnencodablePresentation(
                "target word is trivial given the relators".into(),
            ));
        }
        if word.len() >= 2 {
            let key = (word[0].clone(), word[1].clone());
            let u = match cons.get(&key) {
                Some(u) => u.clone(),
                None => {
                    let u = fresh(&mut gens, &mut fresh_counter, &mut transcript);
                    transcript.push(format!(
                        "chain word: define {u} by relator ({} {} {u})",
                        key.0 .0, key.1 .0
                    ));
                    rels.push(vec![key.0.clone(), key.1.clone(), (u.clone(), 1)]);
                    cons.insert(key, u.clone());
                    u
                }
            };
            let mut rest: Word = vec![(u, -1)];
            rest.extend(word[2..].iter().cloned());
            word = rest;
            continue;
        }
        break;
    }

    let (wname, wsign) = word[0].clone();
    let word_inverted = wsign == -1;
    if word_inverted {
        transcript.push(format!(
            "word reduced to {wname}^-1; using {wname} (trivial iff its inverse is)"
        ));
    }
    let out = NormalizedPresentation {
        generators: gens,
        relators: rels
            .into_iter()
            .map(|r| {
                let mut it = r.into_iter();
                [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
            })
            .collect(),
        word: wname,
        word_inverted,
        transcript,
    };
    out.validate()?;
    Ok(out)
}

/// A finite group as an explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub n: usize,
    /// mul[a][b] = a * b.
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl FiniteGroup {
    /// Exhaustive group-axiom check; n is capped at [`MAX_GROUP_ORDER`].
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.n;
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(GroupError::NotAGroup(format!("order {n} out of range 1..={MAX_GROUP_ORDER}")));
        }
        if self.mul.len() != n || self.mul.iter().any(|r| r.len() != n) {
            return Err(GroupError::NotAGroup("multiplication table is not n x n".into()));
        }
        if self.identity >= n || self.mul.iter().flatten().any(|&v| v >= n) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        let e = self.identity;
        for a in 0..n {
            if self.mul[e][a] != a || self.mul[a][e] != a {
                return Err(GroupError::NotAGroup(format!("{e} is not an identity at {a}")));
            }
            if !(0..n).any(|b| self.mul[a][b] == e && self.mul[b][a] == e) {
                return Err(GroupError::NotAGroup(format!("{a} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn times(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n)
            .find(|&b| self.mul[a][b] == self.identity)
            .expect("validated group has inverses")
    }

    /// Z/n.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup { n, mul, identity: 0 }
    }

    /// The symmetric group on k letters, k <= 5, elements indexed by the
    /// lexicographic order of their image arrays.
    pub fn symmetric(k: usize) -> FiniteGroup {
        assert!(k <= 5, "symmetric constructor capped at k = 5");
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for i in 0..k {
            let mut next = Vec::new();
            for p in &perms {
                for pos in 0..=i {
                    let mut q = p.clone();
                    q.insert(pos, i);
                    next.push(q);
                }
            }
            perms = next;
        }
        perms.sort();
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let n = perms.len();
        let mut mul = vec![vec![0; n]; n];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                // (a*b)(x) = a(b(x))
                let prod: Vec<usize> = (0..k).map(|x| pa[pb[x]]).collect();
                mul[a][b] = index[&prod];
            }
        }
        let identity = index[&(0..k).collect::<Vec<_>>()];
        FiniteGroup { n, mul, identity }
    }

    /// Direct product; element index = a * other.n + b.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let n = self.n * other.n;
        let mut mul = vec![vec![0; n]; n];
        for a1 in 0..self.n {
            for b1 in 0..other.n {
                for a2 in 0..self.n {
                    for b2 in 0..other.n {
                        mul[a1 * other.n + b1][a2 * other.n + b2] =
                            self.mul[a1][a2] * other.n + other.mul[b1][b2];
                    }
                }
            }
        }
        FiniteGroup { n, mul, identity: self.identity * other.n + other.identity }
    }

    /// Regular representation: rho(g) maps h to g * h.
    pub fn regular_representation(&self) -> Vec<Permutation> {
        (0..self.n)
            .map(|g| Permutation::new(self.mul[g].clone()).expect("group rows are bijections"))
            .collect()
    }
}

/// Images of the normalized presentation's generators in a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    /// images[i] = image of generators[i], as a group-element index.
    pub images: Vec<usize>,
}

impl Homomorphism {
    pub fn letter_image(&self, np: &NormalizedPresentation, g: &FiniteGroup, l: &Letter) -> usize {
        let idx = np.generator_index(&l.0).expect("validated letter");
        let im = self.images[idx];
        if l.1 == 1 {
            im
        } else {
            g.inverse(im)
        }
    }

    pub fn word_image(&self, np: &NormalizedPresentation, g: &FiniteGroup, w: &[Letter]) -> usize {
        w.iter().fold(g.identity, |acc, l| g.times(acc, self.letter_image(np, g, l)))
    }

    /// Checks that every relator maps to the identity.
    pub fn validate(&self, np: &NormalizedPresentation, g: &FiniteGroup) -> Result<(), GroupError> {
        if self.images.len() != np.generators.len() {
            return Err(GroupError::InvalidPresentation(
                "image count differs from generator count".into(),
            ));
        }
        if self.images.iter().any(|&i| i >= g.n) {
            return Err(GroupError::InvalidPresentation("image out of range".into()));
        }
        for (i, r) in np.relators.iter().enumerate() {
            if self.word_image(np, g, r) != g.identity {
                return Err(GroupError::NotAHomomorphism(i));
            }
        }
        Ok(())
    }
}

/// Convenience: the presentation <x | xxx> with word x.
pub fn presentation_x_cubed() -> Presentation {
    Presentation {
        generators: vec!["x".into()],
        relators: vec![vec![("x".into(), 1), ("x".into(), 1), ("x".into(), 1)]],
        word: vec![("x".into(), 1)],
    }
}

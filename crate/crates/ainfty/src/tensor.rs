//! The tensor coalgebra T^c(A) on a graded space: deconcatenation
//! coproduct, shuffle product, coderivations, coalgebra morphisms, and the
//! exponential of a degree-zero element.
//!
//! Infinite sums (the completion of T^c(A) along the filtration) are
//! represented operationally: a `TruncationPolicy` fixes a filtration-weight
//! cutoff and a tensor-weight cutoff, every operation discards words beyond
//! the cutoffs, and results remember whether anything was discarded (the
//! `approximate` flag).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::graded::{same_space, Element, GradedSpace};

/// A basis word of the tensor coalgebra: a finite sequence of basis-vector
/// indices. The empty word is the coaugmentation unit 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct TensorWord {
    factors: SmallVec<[u32; 4]>,
}

impl TensorWord {
    pub fn empty() -> TensorWord {
        TensorWord::default()
    }

    pub fn new(factors: impl IntoIterator<Item = u32>) -> TensorWord {
        TensorWord {
            factors: factors.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn degree(&self, space: &GradedSpace) -> i64 {
        self.factors.iter().map(|&i| space.degree(i)).sum()
    }

    /// Filtration weight: the sum of factor weights (0 for the empty word).
    pub fn weight(&self, space: &GradedSpace) -> u32 {
        self.factors.iter().map(|&i| space.weight(i)).sum()
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        TensorWord { factors }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> TensorWord {
        TensorWord {
            factors: self.factors[range].iter().copied().collect(),
        }
    }

    pub fn display<'a>(&'a self, space: &'a GradedSpace) -> impl fmt::Display + 'a {
        struct D<'a>(&'a TensorWord, &'a GradedSpace);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_empty() {
                    return write!(f, "1");
                }
                for (k, &i) in self.0.factors.iter().enumerate() {
                    if k > 0 {
                        write!(f, ".")?;
                    }
                    write!(f, "{}", self.1.vector(i).name())?;
                }
                Ok(())
            }
        }
        D(self, space)
    }
}

/// All basis words of the given tensor weight, in lexicographic order.
pub fn basis_words(space: &GradedSpace, len: usize) -> Vec<TensorWord> {
    if len == 0 {
        return vec![TensorWord::empty()];
    }
    let dim = space.dim() as u32;
    if dim == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut digits = vec![0u32; len];
    loop {
        out.push(TensorWord::new(digits.iter().copied()));
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < dim {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Weight cutoffs realizing the completed tensor coalgebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TruncationPolicy {
    /// Words of filtration weight above this are discarded.
    pub max_filtration_weight: u32,
    /// Words of tensor weight (length) above this are discarded.
    pub max_tensor_weight: u32,
}

impl TruncationPolicy {
    pub fn new(max_filtration_weight: u32, max_tensor_weight: u32) -> TruncationPolicy {
        TruncationPolicy {
            max_filtration_weight,
            max_tensor_weight,
        }
    }

    pub fn admits(&self, word: &TensorWord, space: &GradedSpace) -> bool {
        word.len() as u32 <= self.max_tensor_weight
            && word.weight(space) <= self.max_filtration_weight
    }

    /// A policy at least as permissive in both directions.
    pub fn max(&self, other: &TruncationPolicy) -> TruncationPolicy {
        TruncationPolicy {
            max_filtration_weight: self.max_filtration_weight.max(other.max_filtration_weight),
            max_tensor_weight: self.max_tensor_weight.max(other.max_tensor_weight),
        }
    }
}

/// A sparse element of the truncated tensor coalgebra.
#[derive(Clone, Debug)]
pub struct TensorElement {
    space: Arc<GradedSpace>,
    policy: TruncationPolicy,
    terms: BTreeMap<TensorWord, Scalar>,
    approximate: bool,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl Eq for TensorElement {}

impl TensorElement {
    pub fn zero(space: &Arc<GradedSpace>, policy: TruncationPolicy) -> TensorElement {
        TensorElement {
            space: Arc::clone(space),
            policy,
            terms: BTreeMap::new(),
            approximate: false,
        }
    }

    /// The coaugmentation unit 1 (the empty word).
    pub fn unit(space: &Arc<GradedSpace>, policy: TruncationPolicy) -> TensorElement {
        let mut out = TensorElement::zero(space, policy);
        out.add_word(TensorWord::empty(), &space.field().one());
        out
    }

    pub fn from_word(
        space: &Arc<GradedSpace>,
        policy: TruncationPolicy,
        word: TensorWord,
    ) -> TensorElement {
        let mut out = TensorElement::zero(space, policy);
        let one = space.field().one();
        out.add_word(word, &one);
        out
    }

    /// A weight-one word for each term of an element of A.
    pub fn from_element(x: &Element, policy: TruncationPolicy) -> TensorElement {
        let mut out = TensorElement::zero(x.space(), policy);
        for (i, c) in x.terms() {
            out.add_word(TensorWord::new([i]), c);
        }
        out
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when some word was discarded by the truncation policy while
    /// computing this value.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub(crate) fn mark_approximate(&mut self) {
        self.approximate = true;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &TensorWord) -> Scalar {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| self.space.field().zero())
    }

    /// Adds `c * word`, discarding (and flagging) out-of-policy words.
    pub fn add_word(&mut self, word: TensorWord, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        if !self.policy.admits(&word, &self.space) {
            self.approximate = true;
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert!(
            same_space(&self.space, &other.space),
            "tensor elements over different spaces"
        );
        let mut out = self.clone();
        out.approximate |= other.approximate;
        for (w, c) in other.terms() {
            out.add_word(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorElement {
        TensorElement {
            space: Arc::clone(&self.space),
            policy: self.policy,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
            approximate: self.approximate,
        }
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        if c.is_zero() {
            return TensorElement {
                space: Arc::clone(&self.space),
                policy: self.policy,
                terms: BTreeMap::new(),
                approximate: self.approximate,
            };
        }
        TensorElement {
            space: Arc::clone(&self.space),
            policy: self.policy,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
            approximate: self.approximate,
        }
    }

    /// The weight-one part, as an element of A.
    pub fn cogenerator_part(&self) -> Element {
        let mut out = Element::zero(&self.space);
        for (w, c) in self.terms() {
            if w.len() == 1 {
                out.add_term(w.factors()[0], c);
            }
        }
        out
    }

    /// The coefficient of the empty word.
    pub fn counit_part(&self) -> Scalar {
        self.coeff(&TensorWord::empty())
    }

    /// Restricts to words of exactly the given tensor weight.
    pub fn weight_part(&self, len: usize) -> TensorElement {
        let mut out = TensorElement::zero(&self.space, self.policy);
        out.approximate = self.approximate;
        for (w, c) in self.terms() {
            if w.len() == len {
                out.add_word(w.clone(), c);
            }
        }
        out
    }

    pub fn with_policy(&self, policy: TruncationPolicy) -> TensorElement {
        let mut out = TensorElement::zero(&self.space, policy);
        out.approximate = self.approximate;
        for (w, c) in self.terms() {
            out.add_word(w.clone(), c);
        }
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() && !w.is_empty() {
                write!(f, "{}", w.display(&self.space))?;
            } else {
                write!(f, "{}*{}", c, w.display(&self.space))?;
            }
        }
        Ok(())
    }
}

/// Deconcatenation coproduct, as a formal sum of word pairs.
///
/// No Koszul signs arise: no factors are permuted.
pub fn deconcatenate(x: &TensorElement) -> Vec<(TensorWord, TensorWord, Scalar)> {
    let mut out: BTreeMap<(TensorWord, TensorWord), Scalar> = BTreeMap::new();
    for (w, c) in x.terms() {
        for cut in 0..=w.len() {
            let left = w.slice(0..cut);
            let right = w.slice(cut..w.len());
            let entry = out
                .entry((left, right))
                .or_insert_with(|| x.space().field().zero());
            *entry = &*entry + c;
        }
    }
    out.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((l, r), c)| (l, r, c))
        .collect()
}

/// All shuffles of two words, with Koszul signs, as (word, sign) pairs.
fn shuffle_words(space: &GradedSpace, a: &[u32], b: &[u32]) -> Vec<(TensorWord, i64)> {
    // Walk the lattice of interleavings; crossing sign accumulates when an
    // element of `b` moves past the remaining tail of `a`.
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::with_capacity(a.len() + b.len());
    fn rec(
        space: &GradedSpace,
        a: &[u32],
        b: &[u32],
        i: usize,
        j: usize,
        sign: i64,
        current: &mut Vec<u32>,
        out: &mut Vec<(TensorWord, i64)>,
    ) {
        if i == a.len() && j == b.len() {
            out.push((TensorWord::new(current.iter().copied()), sign));
            return;
        }
        if i < a.len() {
            current.push(a[i]);
            rec(space, a, b, i + 1, j, sign, current, out);
            current.pop();
        }
        if j < b.len() {
            // b[j] crosses a[i..]: one Koszul factor per remaining a-letter.
            let tail_degree: i64 = a[i..].iter().map(|&k| space.degree(k)).sum();
            let crossing = if space.degree(b[j]) % 2 != 0 && tail_degree % 2 != 0 {
                -1
            } else {
                1
            };
            current.push(b[j]);
            rec(space, a, b, i, j + 1, sign * crossing, current, out);
            current.pop();
        }
    }
    rec(space, a, b, 0, 0, 1, &mut current, &mut out);
    out
}

/// Shuffle product on the tensor coalgebra. Bilinear, with Koszul signs;
/// the empty word is the unit.
pub fn shuffle(x: &TensorElement, y: &TensorElement) -> TensorElement {
    assert!(
        same_space(x.space(), y.space()),
        "shuffle of elements over different spaces"
    );
    let mut out = TensorElement::zero(x.space(), x.policy().max(&y.policy()));
    if x.is_approximate() || y.is_approximate() {
        out.mark_approximate();
    }
    let field = x.space().field();
    for (wx, cx) in x.terms() {
        for (wy, cy) in y.terms() {
            let c = cx * cy;
            for (word, sign) in shuffle_words(x.space(), wx.factors(), wy.factors()) {
                out.add_word(word, &(&c * &field.sign(sign)));
            }
        }
    }
    out
}

/// A family of coderivation components: maps from weight-n basis words to
/// elements of A, all homogeneous of one operator degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentFamily {
    space: Arc<GradedSpace>,
    degree: i64,
    by_arity: BTreeMap<usize, BTreeMap<TensorWord, Element>>,
}

impl ComponentFamily {
    pub fn new(space: &Arc<GradedSpace>, degree: i64) -> ComponentFamily {
        ComponentFamily {
            space: Arc::clone(space),
            degree,
            by_arity: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn set(&mut self, word: TensorWord, value: Element) {
        assert!(
            same_space(value.space(), &self.space),
            "component value over a different space"
        );
        if value.is_zero() {
            return;
        }
        self.by_arity
            .entry(word.len())
            .or_default()
            .insert(word, value);
    }

    /// Adds to an existing entry instead of replacing it.
    pub fn accumulate(&mut self, word: TensorWord, value: &Element) {
        let current = self.apply_word(&word);
        let sum = current.add(value);
        let slot = self.by_arity.entry(word.len()).or_default();
        if sum.is_zero() {
            slot.remove(&word);
            if slot.is_empty() {
                let len = word.len();
                self.by_arity.remove(&len);
            }
        } else {
            slot.insert(word, sum);
        }
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_arity.keys().copied()
    }

    pub fn max_arity(&self) -> usize {
        self.by_arity.keys().max().copied().unwrap_or(0)
    }

    pub fn component(&self, arity: usize) -> Option<&BTreeMap<TensorWord, Element>> {
        self.by_arity.get(&arity)
    }

    pub fn get(&self, word: &TensorWord) -> Option<&Element> {
        self.by_arity.get(&word.len()).and_then(|m| m.get(word))
    }

    /// The value on one basis word (zero when absent).
    pub fn apply_word(&self, word: &TensorWord) -> Element {
        self.get(word)
            .cloned()
            .unwrap_or_else(|| Element::zero(&self.space))
    }

    /// Extends the map linearly over a formal combination of basis words of
    /// one arity.
    pub fn apply_combination(&self, words: &[(TensorWord, Scalar)]) -> Element {
        let mut out = Element::zero(&self.space);
        for (w, c) in words {
            out = out.add(&self.apply_word(w).scale(c));
        }
        out
    }
}

/// Extends a component family to a coderivation of the tensor coalgebra
/// and applies it.
///
/// On a word v1...vn the coderivation acts as
///
/// ```text
/// D(v1...vn) = shuffle(D0(1), v1...vn)
///            + sum over p >= 1, 0 <= i <= n-p of
///              (-1)^(|D| * (|v1| + ... + |vi|))
///              v1...vi D_p(v(i+1)...v(i+p)) v(i+p+1)...vn
/// ```
pub fn coderivation_apply(d: &ComponentFamily, x: &TensorElement) -> TensorElement {
    assert!(
        same_space(&d.space, x.space()),
        "coderivation over a different space"
    );
    let mut out = TensorElement::zero(x.space(), x.policy());
    if x.is_approximate() {
        out.mark_approximate();
    }
    let space = x.space();
    let field = space.field();
    for (w, c) in x.terms() {
        // D0 contribution: shuffle the curvature term with the whole word.
        if let Some(d0) = d.by_arity.get(&0) {
            if let Some(value) = d0.get(&TensorWord::empty()) {
                for (i, coeff) in value.terms() {
                    for (word, sign) in shuffle_words(space, &[i], w.factors()) {
                        out.add_word(word, &(&(c * coeff) * &field.sign(sign)));
                    }
                }
            }
        }
        // Interior contributions.
        let n = w.len();
        for (&p, table) in &d.by_arity {
            if p == 0 || p > n {
                continue;
            }
            for i in 0..=(n - p) {
                let mid = w.slice(i..i + p);
                let Some(value) = table.get(&mid) else {
                    continue;
                };
                let prefix_degree: i64 = w.factors()[..i]
                    .iter()
                    .map(|&k| space.degree(k))
                    .sum();
                let sign = if d.degree % 2 != 0 && prefix_degree % 2 != 0 {
                    -1
                } else {
                    1
                };
                let c_signed = c * &field.sign(sign);
                for (letter, coeff) in value.terms() {
                    let mut factors: SmallVec<[u32; 4]> =
                        w.factors()[..i].iter().copied().collect();
                    factors.push(letter);
                    factors.extend_from_slice(&w.factors()[i + p..]);
                    out.add_word(TensorWord { factors }, &(&c_signed * coeff));
                }
            }
        }
    }
    out
}

/// Degree-zero components of a coalgebra morphism T^c(A) -> T^c(B): maps
/// from weight-n basis words of A (n >= 1) to elements of B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismComponents {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    by_arity: BTreeMap<usize, BTreeMap<TensorWord, Element>>,
}

impl MorphismComponents {
    pub fn new(source: &Arc<GradedSpace>, target: &Arc<GradedSpace>) -> MorphismComponents {
        MorphismComponents {
            source: Arc::clone(source),
            target: Arc::clone(target),
            by_arity: BTreeMap::new(),
        }
    }

    pub fn identity(space: &Arc<GradedSpace>) -> MorphismComponents {
        let mut f = MorphismComponents::new(space, space);
        for i in 0..space.dim() as u32 {
            f.set(TensorWord::new([i]), Element::basis(space, i));
        }
        f
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn set(&mut self, word: TensorWord, value: Element) {
        assert!(!word.is_empty(), "morphism components start at weight 1");
        assert!(
            same_space(value.space(), &self.target),
            "morphism value over a space that is not the target"
        );
        if value.is_zero() {
            return;
        }
        self.by_arity
            .entry(word.len())
            .or_default()
            .insert(word, value);
    }

    /// Adds to an existing entry instead of replacing it.
    pub fn accumulate(&mut self, word: TensorWord, value: &Element) {
        assert!(!word.is_empty(), "morphism components start at weight 1");
        let current = self.apply_word(&word);
        let sum = current.add(value);
        let slot = self.by_arity.entry(word.len()).or_default();
        if sum.is_zero() {
            slot.remove(&word);
            if slot.is_empty() {
                let len = word.len();
                self.by_arity.remove(&len);
            }
        } else {
            slot.insert(word, sum);
        }
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_arity.keys().copied()
    }

    pub fn max_arity(&self) -> usize {
        self.by_arity.keys().max().copied().unwrap_or(0)
    }

    pub fn component(&self, arity: usize) -> Option<&BTreeMap<TensorWord, Element>> {
        self.by_arity.get(&arity)
    }

    pub fn get(&self, word: &TensorWord) -> Option<&Element> {
        self.by_arity.get(&word.len()).and_then(|m| m.get(word))
    }

    pub fn apply_word(&self, word: &TensorWord) -> Element {
        self.get(word)
            .cloned()
            .unwrap_or_else(|| Element::zero(&self.target))
    }
}

/// Applies the coalgebra morphism determined by degree-zero components:
///
/// ```text
/// F(a1...an) = sum over compositions k1 + ... + kp = n of
///              F_k1(a1...) tensor ... tensor F_kp(...an),    F(1) = 1.
/// ```
///
/// All components have degree zero, so no Koszul signs arise.
pub fn coalgebra_morphism_apply(f: &MorphismComponents, x: &TensorElement) -> TensorElement {
    assert!(
        same_space(&f.source, x.space()),
        "morphism source space mismatch"
    );
    let mut out = TensorElement::zero(&f.target, x.policy());
    if x.is_approximate() {
        out.mark_approximate();
    }
    for (w, c) in x.terms() {
        let pieces = morphism_word_expansion(f, w, x.policy(), &mut out);
        for (word, coeff) in pieces {
            out.add_word(word, &(&coeff * c));
        }
    }
    out
}

/// Expands F on one basis word into target words, recursively over the
/// leading block size.
fn morphism_word_expansion(
    f: &MorphismComponents,
    w: &TensorWord,
    policy: TruncationPolicy,
    flag_sink: &mut TensorElement,
) -> Vec<(TensorWord, Scalar)> {
    let field = f.target.field();
    if w.is_empty() {
        return vec![(TensorWord::empty(), field.one())];
    }
    let mut out: BTreeMap<TensorWord, Scalar> = BTreeMap::new();
    for k in 1..=w.len() {
        let head = w.slice(0..k);
        let value = f.apply_word(&head);
        if value.is_zero() {
            continue;
        }
        let rest = w.slice(k..w.len());
        let tails = morphism_word_expansion(f, &rest, policy, flag_sink);
        for (i, c) in value.terms() {
            for (tail, tc) in &tails {
                let mut factors: SmallVec<[u32; 4]> = SmallVec::new();
                factors.push(i);
                factors.extend_from_slice(tail.factors());
                let word = TensorWord { factors };
                if !policy.admits(&word, &f.target) {
                    flag_sink.mark_approximate();
                    continue;
                }
                let entry = out.entry(word).or_insert_with(|| field.zero());
                *entry = &*entry + &(c * tc);
            }
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// The exponential of a degree-zero element: the sum of its concatenation
/// powers `1 + x + x.x + ...` up to the truncation policy.
pub fn exponential(x: &Element, policy: TruncationPolicy) -> Result<TensorElement> {
    if !x.is_zero() && x.homogeneous_degree() != Some(0) {
        return Err(Error::WrongDegree {
            expected: 0,
            found: x.homogeneous_degree(),
        });
    }
    let space = x.space();
    let mut out = TensorElement::unit(space, policy);
    if x.is_zero() {
        return Ok(out);
    }
    // Expand (sum_i c_i b_i)^(tensor k) one power at a time.
    let mut power: Vec<(TensorWord, Scalar)> = vec![(TensorWord::empty(), space.field().one())];
    loop {
        let mut next: Vec<(TensorWord, Scalar)> = Vec::new();
        let mut any_admitted = false;
        for (w, c) in &power {
            for (i, ci) in x.terms() {
                let word = w.concat(&TensorWord::new([i]));
                let coeff = c * ci;
                if policy.admits(&word, space) {
                    any_admitted = true;
                    next.push((word, coeff));
                } else {
                    out.mark_approximate();
                }
            }
        }
        if !any_admitted {
            break;
        }
        for (w, c) in &next {
            out.add_word(w.clone(), c);
        }
        power = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::graded::BasisVector;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::new(8, 8)
    }

    fn space() -> Arc<GradedSpace> {
        GradedSpace::new(
            FieldSpec::RATIONALS,
            vec![
                BasisVector::new("u", 0, 1),
                BasisVector::new("v", 1, 1),
                BasisVector::new("w", 1, 1),
            ],
        )
        .unwrap()
    }

    fn word(space: &Arc<GradedSpace>, names: &[&str]) -> TensorWord {
        TensorWord::new(
            names
                .iter()
                .map(|n| space.index_of(n).unwrap())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn deconcatenation_of_pair() {
        let s = space();
        let x = TensorElement::from_word(&s, policy(), word(&s, &["u", "v"]));
        let pairs = deconcatenate(&x);
        assert_eq!(pairs.len(), 3);
        let empty = TensorWord::empty();
        let u = word(&s, &["u"]);
        let v = word(&s, &["v"]);
        let uv = word(&s, &["u", "v"]);
        let one = FieldSpec::RATIONALS.one();
        assert!(pairs.contains(&(empty.clone(), uv.clone(), one.clone())));
        assert!(pairs.contains(&(uv, empty, one.clone())));
        assert!(pairs.contains(&(u, v, one)));
    }

    #[test]
    fn deconcatenation_of_unit_and_letter() {
        let s = space();
        let unit = TensorElement::unit(&s, policy());
        assert_eq!(deconcatenate(&unit).len(), 1);
        let x = TensorElement::from_word(&s, policy(), word(&s, &["u"]));
        assert_eq!(deconcatenate(&x).len(), 2);
    }

    #[test]
    fn shuffle_of_odd_letters_anticommutes() {
        let s = space();
        let v = TensorElement::from_word(&s, policy(), word(&s, &["v"]));
        let w = TensorElement::from_word(&s, policy(), word(&s, &["w"]));
        let vw = shuffle(&v, &w);
        // v.w - w.v
        assert_eq!(vw.coeff(&word(&s, &["v", "w"])), FieldSpec::RATIONALS.one());
        assert_eq!(
            vw.coeff(&word(&s, &["w", "v"])),
            FieldSpec::RATIONALS.from_i64(-1)
        );
    }

    #[test]
    fn shuffle_unit_law() {
        let s = space();
        let x = TensorElement::from_word(&s, policy(), word(&s, &["u", "v"]));
        let unit = TensorElement::unit(&s, policy());
        assert_eq!(shuffle(&unit, &x), x);
        assert_eq!(shuffle(&x, &unit), x);
    }

    #[test]
    fn shuffle_even_letter_into_square() {
        let s = space();
        let u = TensorElement::from_word(&s, policy(), word(&s, &["u"]));
        let uu = TensorElement::from_word(&s, policy(), word(&s, &["u", "u"]));
        let res = shuffle(&u, &uu);
        assert_eq!(
            res.coeff(&word(&s, &["u", "u", "u"])),
            FieldSpec::RATIONALS.from_i64(3)
        );
    }

    #[test]
    fn coderivation_with_only_d1_is_a_derivation_on_words() {
        let s = space();
        let mut d = ComponentFamily::new(&s, 1);
        // D1(u) = v
        d.set(word(&s, &["u"]), Element::basis_named(&s, "v").unwrap());
        let x = TensorElement::from_word(&s, policy(), word(&s, &["u", "u"]));
        let dx = coderivation_apply(&d, &x);
        assert_eq!(dx.coeff(&word(&s, &["v", "u"])), FieldSpec::RATIONALS.one());
        assert_eq!(dx.coeff(&word(&s, &["u", "v"])), FieldSpec::RATIONALS.one());
    }

    #[test]
    fn coderivation_sign_passes_odd_prefix() {
        let s = space();
        let mut d = ComponentFamily::new(&s, 1);
        // D1(v) = u; applying past the odd letter v flips the sign.
        d.set(word(&s, &["v"]), Element::basis_named(&s, "u").unwrap());
        let x = TensorElement::from_word(&s, policy(), word(&s, &["v", "v"]));
        let dx = coderivation_apply(&d, &x);
        assert_eq!(dx.coeff(&word(&s, &["u", "v"])), FieldSpec::RATIONALS.one());
        assert_eq!(
            dx.coeff(&word(&s, &["v", "u"])),
            FieldSpec::RATIONALS.from_i64(-1)
        );
    }

    #[test]
    fn coderivation_d0_shuffles_in() {
        let s = space();
        let mut d = ComponentFamily::new(&s, 1);
        d.set(TensorWord::empty(), Element::basis_named(&s, "v").unwrap());
        let unit = TensorElement::unit(&s, policy());
        let du = coderivation_apply(&d, &unit);
        assert_eq!(du.coeff(&word(&s, &["v"])), FieldSpec::RATIONALS.one());
        let x = TensorElement::from_word(&s, policy(), word(&s, &["u"]));
        let dx = coderivation_apply(&d, &x);
        // shuffle(v, u) = v.u + u.v
        assert_eq!(dx.coeff(&word(&s, &["v", "u"])), FieldSpec::RATIONALS.one());
        assert_eq!(dx.coeff(&word(&s, &["u", "v"])), FieldSpec::RATIONALS.one());
    }

    #[test]
    fn coderivation_d2_on_triple() {
        let s = space();
        let mut d = ComponentFamily::new(&s, 1);
        d.set(word(&s, &["u", "u"]), Element::basis_named(&s, "v").unwrap());
        let x = TensorElement::from_word(&s, policy(), word(&s, &["u", "u", "u"]));
        let dx = coderivation_apply(&d, &x);
        assert_eq!(dx.coeff(&word(&s, &["v", "u"])), FieldSpec::RATIONALS.one());
        assert_eq!(dx.coeff(&word(&s, &["u", "v"])), FieldSpec::RATIONALS.one());
    }

    #[test]
    fn morphism_identity_and_f2_term() {
        let s = space();
        let mut f = MorphismComponents::identity(&s);
        f.set(word(&s, &["u", "u"]), Element::basis_named(&s, "v").unwrap());
        let x = TensorElement::from_word(&s, policy(), word(&s, &["u", "u"]));
        let fx = coalgebra_morphism_apply(&f, &x);
        assert_eq!(fx.coeff(&word(&s, &["u", "u"])), FieldSpec::RATIONALS.one());
        assert_eq!(fx.coeff(&word(&s, &["v"])), FieldSpec::RATIONALS.one());
        let unit = TensorElement::unit(&s, policy());
        assert_eq!(coalgebra_morphism_apply(&f, &unit), unit);
    }

    #[test]
    fn exponential_small_truncation() {
        let s = space();
        let u = Element::basis_named(&s, "u").unwrap();
        let e = exponential(&u, TruncationPolicy::new(2, 2)).unwrap();
        assert_eq!(e.coeff(&TensorWord::empty()), FieldSpec::RATIONALS.one());
        assert_eq!(e.coeff(&word(&s, &["u"])), FieldSpec::RATIONALS.one());
        assert_eq!(e.coeff(&word(&s, &["u", "u"])), FieldSpec::RATIONALS.one());
        assert!(e.is_approximate());
        assert_eq!(e.terms().count(), 3);
    }

    #[test]
    fn exponential_of_zero_is_unit() {
        let s = space();
        let e = exponential(&Element::zero(&s), policy()).unwrap();
        assert_eq!(e, TensorElement::unit(&s, policy()));
        assert!(!e.is_approximate());
    }

    #[test]
    fn exponential_rejects_wrong_degree() {
        let s = space();
        let v = Element::basis_named(&s, "v").unwrap();
        assert!(exponential(&v, policy()).is_err());
    }

    #[test]
    fn exponential_is_group_like() {
        let s = space();
        let u = Element::basis_named(&s, "u").unwrap();
        let pol = TruncationPolicy::new(6, 6);
        let e = exponential(&u, pol).unwrap();
        // Delta(e) = e tensor e up to truncation.
        let pairs = deconcatenate(&e);
        for (l, r, c) in pairs {
            let expected = &e.coeff(&l) * &e.coeff(&r);
            assert_eq!(c, expected);
        }
        // e^u shuffled with e^(-u) is 1 up to truncation.
        let e_neg = exponential(&u.neg(), pol).unwrap();
        let prod = shuffle(&e, &e_neg);
        assert_eq!(prod, TensorElement::unit(&s, pol));
    }
}

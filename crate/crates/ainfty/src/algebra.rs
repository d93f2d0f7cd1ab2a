//! Curved shifted A-infinity structures and infinity-morphisms.
//!
//! A structure is a finite family of components `Q_n`, each sending weight-n
//! basis words to elements of the same space, all of degree +1. The `n = 0`
//! component is the curvature `Q_0(1)`. The Stasheff relations
//!
//! ```text
//! sum over a + b + c = n of
//!   (-1)^(|a_1| + ... + |a_a|) Q_(a+1+c)(a_1 ... a_a, Q_b(...), ..., a_n) = 0
//! ```
//!
//! are checked by `stasheff_check`; the sign is the Koszul sign of moving the
//! degree-1 operation past the prefix.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::{same_space, Element, GradedSpace, Weight};
use crate::tensor::{
    basis_words, coalgebra_morphism_apply, coderivation_apply, ComponentFamily,
    MorphismComponents, TensorElement, TensorWord, TruncationPolicy,
};

/// A curved shifted A-infinity algebra on a graded space: components
/// `Q_n` of degree +1, finitely many nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInftyStructure {
    components: ComponentFamily,
}

/// Outcome of a Stasheff-relation check: pass, or the first relation with a
/// nonzero residual, in ascending (arity, word) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StasheffReport {
    Pass,
    Fail {
        arity: usize,
        word: TensorWord,
        residual: Element,
    },
}

impl StasheffReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, StasheffReport::Pass)
    }
}

impl fmt::Display for StasheffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StasheffReport::Pass => write!(f, "pass"),
            StasheffReport::Fail {
                arity,
                word,
                residual,
            } => write!(
                f,
                "fail at arity {} on {}: residual {}",
                arity,
                word.display(residual.space()),
                residual
            ),
        }
    }
}

impl AInftyStructure {
    /// Wraps a degree-+1 component family, checking that every component
    /// value is homogeneous of degree (input degree + 1) and respects the
    /// filtration: weight(Q_n(w)) >= weight(w), and Q_0(1) has weight >= 1.
    ///
    /// The Stasheff relations are not checked here; see `stasheff_check`.
    pub fn new(components: ComponentFamily) -> Result<AInftyStructure> {
        assert_eq!(components.degree(), 1, "structure components have degree +1");
        let a = AInftyStructure { components };
        a.check_shapes()?;
        Ok(a)
    }

    /// Skips the shape checks; for building deliberately broken structures.
    pub fn new_unchecked(components: ComponentFamily) -> AInftyStructure {
        assert_eq!(components.degree(), 1, "structure components have degree +1");
        AInftyStructure { components }
    }

    /// Builds the component family from (word, value) entries and validates.
    pub fn from_entries(
        space: &Arc<GradedSpace>,
        entries: impl IntoIterator<Item = (TensorWord, Element)>,
    ) -> Result<AInftyStructure> {
        let mut family = ComponentFamily::new(space, 1);
        for (w, v) in entries {
            family.set(w, v);
        }
        AInftyStructure::new(family)
    }

    fn check_shapes(&self) -> Result<()> {
        let space = self.space();
        for n in self.components.arities() {
            for (word, value) in self.components.component(n).unwrap() {
                let expected = word.degree(space) + 1;
                match value.homogeneous_degree() {
                    Some(d) if d == expected => {}
                    found => {
                        return Err(Error::ComponentDegree {
                            op: "Q",
                            arity: n,
                            word: word.display(space).to_string(),
                            expected,
                            found,
                        })
                    }
                }
                let required = word.weight(space).max(1);
                if let Weight::Finite(to) = value.filtration_weight() {
                    if to < required {
                        return Err(Error::ComponentWeight {
                            op: "Q",
                            arity: n,
                            word: word.display(space).to_string(),
                            from: required,
                            to,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.components.space()
    }

    pub fn field(&self) -> FieldSpec {
        self.space().field()
    }

    pub fn max_arity(&self) -> usize {
        self.components.max_arity()
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.arities()
    }

    pub fn component(&self, arity: usize) -> Option<&BTreeMap<TensorWord, Element>> {
        self.components.component(arity)
    }

    /// `Q_n` on one basis word of weight n (zero when absent).
    pub fn apply_word(&self, word: &TensorWord) -> Element {
        self.components.apply_word(word)
    }

    pub(crate) fn get(&self, word: &TensorWord) -> Option<&Element> {
        self.components.get(word)
    }

    /// The multilinear expansion of `Q_l` at `x ⊗ ... ⊗ x`.
    ///
    /// Expanding a tensor power of a single element keeps the factor order,
    /// so no Koszul signs arise regardless of the degrees in `x`.
    pub fn apply_power(&self, x: &Element, l: usize) -> Element {
        assert!(
            same_space(x.space(), self.space()),
            "element is not over the structure's space"
        );
        if l == 0 {
            return self.algebra_curvature();
        }
        let mut out = Element::zero(self.space());
        if self.components.component(l).is_none() {
            return out;
        }
        let support: Vec<(u32, Scalar)> = x.terms().map(|(i, c)| (i, c.clone())).collect();
        if support.is_empty() {
            return out;
        }
        let mut digits = vec![0usize; l];
        loop {
            let word = TensorWord::new(digits.iter().map(|&d| support[d].0));
            if let Some(value) = self.get(&word) {
                let mut c = self.field().one();
                for &d in &digits {
                    c = &c * &support[d].1;
                }
                out = out.add(&value.scale(&c));
            }
            let mut i = l;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < support.len() {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
        out
    }

    /// The curvature `Q_0(1)`.
    pub fn algebra_curvature(&self) -> Element {
        self.components.apply_word(&TensorWord::empty())
    }

    pub fn is_flat(&self) -> bool {
        self.algebra_curvature().is_zero()
    }

    /// The components as a coderivation family, for `coderivation_apply`.
    pub fn as_codifferential(&self) -> &ComponentFamily {
        &self.components
    }

    /// Evaluates every Stasheff relation of arity `n <= up_to_arity` on every
    /// basis word and reports the first nonzero residual.
    ///
    /// The relations are accumulated sparsely: a word can only have a
    /// nonzero residual term when some outer component value contains, at
    /// some position, a letter produced by an inner component; iterating
    /// over the component tables reaches exactly those words, and all
    /// others hold trivially.
    pub fn stasheff_check(&self, up_to_arity: usize) -> StasheffReport {
        let space = self.space();
        let field = self.field();
        // Inner components indexed by each letter of their value.
        let mut by_letter: BTreeMap<u32, Vec<(usize, &TensorWord, crate::field::Scalar)>> =
            BTreeMap::new();
        for b in self.components.arities() {
            for (mid, value) in self.components.component(b).unwrap() {
                for (ell, c) in value.terms() {
                    by_letter.entry(ell).or_default().push((b, mid, c.clone()));
                }
            }
        }
        let mut residuals: BTreeMap<(usize, TensorWord), Element> = BTreeMap::new();
        for m in self.components.arities() {
            for (z, out_val) in self.components.component(m).unwrap() {
                for a in 0..m {
                    let Some(inners) = by_letter.get(&z.factors()[a]) else {
                        continue;
                    };
                    let prefix_degree: i64 = z.factors()[..a]
                        .iter()
                        .map(|&k| space.degree(k))
                        .sum();
                    let sign = field.sign(if prefix_degree % 2 != 0 { -1 } else { 1 });
                    for (b, mid, c) in inners {
                        let n = m - 1 + b;
                        if n > up_to_arity {
                            continue;
                        }
                        let mut factors: SmallVec<[u32; 4]> =
                            z.factors()[..a].iter().copied().collect();
                        factors.extend_from_slice(mid.factors());
                        factors.extend_from_slice(&z.factors()[a + 1..]);
                        let w = TensorWord::new(factors);
                        let contrib = out_val.scale(&(&sign * c));
                        let slot = residuals
                            .entry((n, w))
                            .or_insert_with(|| Element::zero(space));
                        *slot = slot.add(&contrib);
                    }
                }
            }
        }
        for ((n, w), r) in residuals {
            if !r.is_zero() {
                return StasheffReport::Fail {
                    arity: n,
                    word: w,
                    residual: r,
                };
            }
        }
        StasheffReport::Pass
    }

    /// Checks every relation that can be nonzero. A relation of arity n
    /// needs an outer component of arity n - b + 1 and an inner one of
    /// arity b, so all its terms vanish once n > 2 * max_arity - 1.
    pub fn validate(&self) -> StasheffReport {
        self.stasheff_check((2 * self.max_arity()).saturating_sub(1))
    }
}

impl fmt::Display for AInftyStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = self.space();
        let mut any = false;
        for n in self.components.arities() {
            for (w, v) in self.components.component(n).unwrap() {
                if any {
                    writeln!(f)?;
                }
                any = true;
                write!(f, "Q_{}({}) = {}", n, w.display(space), v)?;
            }
        }
        if !any {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An infinity-morphism between structures: degree-zero components
/// `F_n`, n >= 1, from source basis words to target elements.
///
/// The intertwining equation `F Q_A = Q_B F` is not part of construction;
/// it is checked by `morphism_check`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InftyMorphism {
    source: AInftyStructure,
    target: AInftyStructure,
    components: MorphismComponents,
}

/// Outcome of an intertwining check: pass, or the first basis word where
/// `F(Q_A(w))` and `Q_B(F(w))` differ, with their difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismReport {
    Pass,
    Fail {
        weight: usize,
        word: TensorWord,
        residual: TensorElement,
    },
}

impl MorphismReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, MorphismReport::Pass)
    }
}

impl fmt::Display for MorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismReport::Pass => write!(f, "pass"),
            MorphismReport::Fail {
                weight,
                word,
                residual,
            } => write!(
                f,
                "fail at weight {} on {}: residual {}",
                weight,
                word.display(residual.space()),
                residual
            ),
        }
    }
}

impl InftyMorphism {
    /// Checks that each `F_n(w)` is homogeneous of the degree of `w` and
    /// respects the filtration: weight(F_n(w)) >= weight(w).
    pub fn new(
        source: AInftyStructure,
        target: AInftyStructure,
        components: MorphismComponents,
    ) -> Result<InftyMorphism> {
        assert!(
            same_space(components.source(), source.space()),
            "morphism components not over the source space"
        );
        assert!(
            same_space(components.target(), target.space()),
            "morphism components not over the target space"
        );
        let src = source.space();
        for n in components.arities() {
            for (word, value) in components.component(n).unwrap() {
                let expected = word.degree(src);
                match value.homogeneous_degree() {
                    Some(d) if d == expected => {}
                    found => {
                        return Err(Error::ComponentDegree {
                            op: "F",
                            arity: n,
                            word: word.display(src).to_string(),
                            expected,
                            found,
                        })
                    }
                }
                let required = word.weight(src);
                if let Weight::Finite(to) = value.filtration_weight() {
                    if to < required {
                        return Err(Error::ComponentWeight {
                            op: "F",
                            arity: n,
                            word: word.display(src).to_string(),
                            from: required,
                            to,
                        });
                    }
                }
            }
        }
        Ok(InftyMorphism {
            source,
            target,
            components,
        })
    }

    pub fn new_unchecked(
        source: AInftyStructure,
        target: AInftyStructure,
        components: MorphismComponents,
    ) -> InftyMorphism {
        InftyMorphism {
            source,
            target,
            components,
        }
    }

    pub fn identity(a: &AInftyStructure) -> InftyMorphism {
        InftyMorphism {
            source: a.clone(),
            target: a.clone(),
            components: MorphismComponents::identity(a.space()),
        }
    }

    pub fn source(&self) -> &AInftyStructure {
        &self.source
    }

    pub fn target(&self) -> &AInftyStructure {
        &self.target
    }

    pub fn components(&self) -> &MorphismComponents {
        &self.components
    }

    pub fn max_arity(&self) -> usize {
        self.components.max_arity()
    }

    pub fn is_strict(&self) -> bool {
        self.components.max_arity() <= 1
    }

    /// `F_n` on one basis word (zero when absent).
    pub fn apply_word(&self, word: &TensorWord) -> Element {
        self.components.apply_word(word)
    }

    /// The induced coalgebra morphism on a tensor element.
    pub fn apply(&self, x: &TensorElement) -> TensorElement {
        coalgebra_morphism_apply(&self.components, x)
    }

    /// Compares `F(Q_A(w))` with `Q_B(F(w))` on every basis word of tensor
    /// weight `<= up_to_weight`. Both sides stay within words of weight
    /// n + 1, so the comparison is exact.
    pub fn morphism_check(&self, up_to_weight: usize) -> MorphismReport {
        for n in 0..=up_to_weight {
            let policy = TruncationPolicy::new(u32::MAX, n as u32 + 1);
            for w in basis_words(self.source.space(), n) {
                let x = TensorElement::from_word(self.source.space(), policy, w.clone());
                let lhs = self.apply(&coderivation_apply(self.source.as_codifferential(), &x));
                let rhs = coderivation_apply(self.target.as_codifferential(), &self.apply(&x));
                let residual = lhs.sub(&rhs);
                if !residual.is_zero() {
                    return MorphismReport::Fail {
                        weight: n,
                        word: w,
                        residual,
                    };
                }
            }
        }
        MorphismReport::Pass
    }

    /// The same check through the projection to cogenerators: compares the
    /// weight-one component of each side directly from the tables. As the
    /// tensor coalgebra is cofree, this is equivalent to `morphism_check`,
    /// and at the first failing word the two residuals agree.
    pub fn morphism_check_components(&self, up_to_weight: usize) -> MorphismReport {
        for n in 0..=up_to_weight {
            let policy = TruncationPolicy::new(u32::MAX, n as u32 + 1);
            for w in basis_words(self.source.space(), n) {
                let x = TensorElement::from_word(self.source.space(), policy, w.clone());
                let mut lhs = Element::zero(self.target.space());
                for (z, c) in coderivation_apply(self.source.as_codifferential(), &x).terms() {
                    lhs = lhs.add(&self.components.apply_word(z).scale(c));
                }
                let mut rhs = Element::zero(self.target.space());
                for (y, c) in self.apply(&x).terms() {
                    rhs = rhs.add(&self.target.apply_word(y).scale(c));
                }
                let diff = lhs.sub(&rhs);
                if !diff.is_zero() {
                    return MorphismReport::Fail {
                        weight: n,
                        word: w,
                        residual: TensorElement::from_element(&diff, policy),
                    };
                }
            }
        }
        MorphismReport::Pass
    }

    /// A weight beyond which every term of the intertwining equation
    /// vanishes: the target side splits a word into at most max_arity(Q_B)
    /// blocks of length at most max_arity(F), the source side applies
    /// components of total reach max_arity(F) + max_arity(Q_A) - 1.
    pub fn intertwining_bound(&self) -> usize {
        let mf = self.components.max_arity();
        let qa = self.source.max_arity();
        let qb = self.target.max_arity();
        (mf * qb).max(mf + qa.saturating_sub(1)).max(1)
    }

    /// The element `x_F = sum over n >= 1 of F_n(x, ..., x)`. The sum is
    /// finite because only finitely many components are nonzero.
    pub fn pushforward_element(&self, x: &Element) -> Result<Element> {
        if !x.is_zero() && x.homogeneous_degree() != Some(0) {
            return Err(Error::WrongDegree {
                expected: 0,
                found: x.homogeneous_degree(),
            });
        }
        assert!(
            same_space(x.space(), self.source.space()),
            "element not over the morphism source"
        );
        let support: Vec<(u32, crate::field::Scalar)> =
            x.terms().map(|(i, c)| (i, c.clone())).collect();
        let mut out = Element::zero(self.target.space());
        if support.is_empty() {
            return Ok(out);
        }
        for n in 1..=self.components.max_arity() {
            if self.components.component(n).is_none() {
                continue;
            }
            let mut digits = vec![0usize; n];
            loop {
                let word = TensorWord::new(digits.iter().map(|&d| support[d].0));
                if let Some(value) = self.components.get(&word) {
                    let mut c = self.target.field().one();
                    for &d in &digits {
                        c = &c * &support[d].1;
                    }
                    out = out.add(&value.scale(&c));
                }
                let mut i = n;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < support.len() {
                        break;
                    }
                    digits[i] = 0;
                }
                if digits.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// Composes two morphisms `F` after `G`: the components are
///
/// ```text
/// (F o G)_n = sum over k_1 + ... + k_p = n of F_p(G_k1 tensor ... tensor G_kp),
/// ```
///
/// computed by running over tuples of nonzero `G` entries.
pub fn compose_morphisms(f: &InftyMorphism, g: &InftyMorphism) -> Result<InftyMorphism> {
    if f.source != g.target {
        return Err(Error::ComposeMismatch);
    }
    let mut entries: Vec<(&TensorWord, &Element)> = Vec::new();
    for n in g.components.arities() {
        for (w, v) in g.components.component(n).unwrap() {
            entries.push((w, v));
        }
    }
    let mut composed = MorphismComponents::new(g.source.space(), f.target.space());
    for p in 1..=f.components.max_arity() {
        if f.components.component(p).is_none() || entries.is_empty() {
            continue;
        }
        let mut choice = vec![0usize; p];
        loop {
            let mut source_word = TensorWord::empty();
            for &e in &choice {
                source_word = source_word.concat(entries[e].0);
            }
            // Expand the tensor of the chosen values letter by letter.
            let one = f.target.field().one();
            let mut blocks: Vec<(TensorWord, crate::field::Scalar)> =
                vec![(TensorWord::empty(), one)];
            for &e in &choice {
                let mut next = Vec::new();
                for (prefix, c) in &blocks {
                    for (i, ci) in entries[e].1.terms() {
                        next.push((prefix.concat(&TensorWord::new([i])), c * ci));
                    }
                }
                blocks = next;
            }
            for (bword, c) in blocks {
                if let Some(value) = f.components.get(&bword) {
                    composed.accumulate(source_word.clone(), &value.scale(&c));
                }
            }
            let mut i = p;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < entries.len() {
                    break;
                }
                choice[i] = 0;
            }
            if choice.iter().all(|&e| e == 0) {
                break;
            }
        }
    }
    InftyMorphism::new(g.source.clone(), f.target.clone(), composed)
}

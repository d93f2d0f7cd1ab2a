//! Twisting by degree-zero elements: element curvature, the Maurer-Cartan
//! predicate, the twisted structure, and twisted morphisms.
//!
//! The production route evaluates the component formula
//!
//! ```text
//! Q^x_n(a_1 ... a_n) = sum over p >= 0 of Q_(n+p)(sh(x^p, a_1 ... a_n)),
//! ```
//!
//! sparsely: running over the component table, each entry `Q_m(z)`
//! contributes to `Q^x_(m-k)(w)` for every way of deleting `k` letters of
//! `z` that lie in the support of `x`. Since `x` has degree 0, no Koszul
//! signs appear. `twist_oracle` instead conjugates the codifferential by
//! the shuffle action of the exponential, using only coalgebra primitives,
//! and the two must agree.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::algebra::{AInftyStructure, InftyMorphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::graded::{same_space, Element};
use crate::tensor::{
    basis_words, coderivation_apply, exponential, shuffle, ComponentFamily, MorphismComponents,
    TensorElement, TensorWord, TruncationPolicy,
};

/// A structure, a twisting element, and the twisted structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistResult {
    pub base: AInftyStructure,
    pub twisting_element: Element,
    pub twisted: AInftyStructure,
}

fn check_twisting_element(a: &AInftyStructure, x: &Element) -> Result<()> {
    assert!(
        same_space(x.space(), a.space()),
        "twisting element over a different space"
    );
    if !x.is_zero() && x.homogeneous_degree() != Some(0) {
        return Err(Error::WrongDegree {
            expected: 0,
            found: x.homogeneous_degree(),
        });
    }
    Ok(())
}

/// The curvature of an element: `R(x) = sum over l >= 0 of Q_l(x, ..., x)`.
/// The sum is finite because the structure has finitely many components.
pub fn element_curvature(a: &AInftyStructure, x: &Element) -> Result<Element> {
    check_twisting_element(a, x)?;
    let mut out = a.algebra_curvature();
    for l in 1..=a.max_arity() {
        out = out.add(&a.apply_power(x, l));
    }
    Ok(out)
}

/// Whether `x` satisfies the Maurer-Cartan equation `R(x) = 0`.
pub fn is_mc(a: &AInftyStructure, x: &Element) -> Result<bool> {
    Ok(element_curvature(a, x)?.is_zero())
}

/// For each way of deleting letters of `z` that lie in the support of
/// `x`, the remaining word together with the product of the deleted
/// letters' coefficients, summed over deletion patterns.
fn deletion_patterns(x: &Element, z: &TensorWord) -> BTreeMap<TensorWord, Scalar> {
    let field = x.space().field();
    let m = z.len();
    assert!(m < 32, "component arity too large to twist");
    let letters: Vec<Option<Scalar>> = z
        .factors()
        .iter()
        .map(|&i| {
            let c = x.coeff(i);
            if c.is_zero() {
                None
            } else {
                Some(c)
            }
        })
        .collect();
    let mut allowed = 0u32;
    for (i, l) in letters.iter().enumerate() {
        if l.is_some() {
            allowed |= 1 << i;
        }
    }
    let mut out = BTreeMap::new();
    let mut mask = 0u32;
    loop {
        let mut coeff = field.one();
        let mut kept: SmallVec<[u32; 4]> = SmallVec::new();
        for i in 0..m {
            if mask & (1 << i) != 0 {
                coeff = &coeff * letters[i].as_ref().unwrap();
            } else {
                kept.push(z.factors()[i]);
            }
        }
        let entry = out
            .entry(TensorWord::new(kept))
            .or_insert_with(|| field.zero());
        *entry = &*entry + &coeff;
        // Next submask of `allowed`, counting up.
        mask = (mask.wrapping_sub(allowed)) & allowed;
        if mask == 0 {
            break;
        }
    }
    out
}

/// Twists the structure by a degree-zero element via the component
/// formula. The result is exact: every sum here is finite.
pub fn twist(a: &AInftyStructure, x: &Element) -> Result<TwistResult> {
    check_twisting_element(a, x)?;
    let mut family = ComponentFamily::new(a.space(), 1);
    for m in a.arities() {
        for (z, value) in a.component(m).unwrap() {
            for (w, c) in deletion_patterns(x, z) {
                family.accumulate(w, &value.scale(&c));
            }
        }
    }
    Ok(TwistResult {
        base: a.clone(),
        twisting_element: x.clone(),
        twisted: AInftyStructure::new(family)?,
    })
}

/// Twists by conjugating the codifferential with the shuffle action of
/// `exp(x)`, literally, in a truncated tensor coalgebra, then projecting
/// to cogenerators.
///
/// A word of the intermediate `exp(x) . w` can only reach the cogenerator
/// projection if its length is at most the largest arity, so the internal
/// tensor-weight cutoff max_arity (at least 1, to admit the curvature)
/// makes the projections exact even though the intermediates are
/// truncated.
pub fn twist_oracle(a: &AInftyStructure, x: &Element) -> Result<AInftyStructure> {
    check_twisting_element(a, x)?;
    let space = a.space();
    let policy = TruncationPolicy::new(u32::MAX, a.max_arity().max(1) as u32);
    let e_pos = exponential(x, policy)?;
    let e_neg = exponential(&x.neg(), policy)?;
    // A word can only project nonzero if inserting x letters into it
    // reaches a component-table key, so its weight is bounded by the
    // heaviest key.
    let max_key_weight = a
        .arities()
        .flat_map(|m| a.component(m).unwrap().keys())
        .map(|z| z.weight(space))
        .max()
        .unwrap_or(0);
    let mut family = ComponentFamily::new(space, 1);
    for n in 0..=a.max_arity() {
        for w in basis_words(space, n) {
            if w.weight(space) > max_key_weight {
                continue;
            }
            let v = TensorElement::from_word(space, policy, w.clone());
            let inside = coderivation_apply(a.as_codifferential(), &shuffle(&e_pos, &v));
            let conj = shuffle(&e_neg, &inside);
            family.set(w, conj.cogenerator_part());
        }
    }
    AInftyStructure::new(family)
}

/// The residual of the differential Bianchi identity
///
/// ```text
/// sum over l >= 1 of Q_l(sh(x^(l-1), R(x))),
/// ```
///
/// which vanishes for every valid structure and every degree-zero `x`.
pub fn bianchi_residual(a: &AInftyStructure, x: &Element) -> Result<Element> {
    check_twisting_element(a, x)?;
    let r = element_curvature(a, x)?;
    let support: Vec<(u32, Scalar)> = x.terms().map(|(i, c)| (i, c.clone())).collect();
    let mut out = Element::zero(a.space());
    for l in 1..=a.max_arity() {
        // Words: l - 1 letters of x with one letter of R(x) inserted at
        // any position. All x letters have degree 0, so no signs.
        let k = l - 1;
        if k > 0 && support.is_empty() {
            continue;
        }
        let mut digits = vec![0usize; k];
        loop {
            let mut c_x = a.field().one();
            for &d in &digits {
                c_x = &c_x * &support[d].1;
            }
            for (ri, rc) in r.terms() {
                for pos in 0..=k {
                    let mut factors: SmallVec<[u32; 4]> = SmallVec::new();
                    for &d in &digits[..pos] {
                        factors.push(support[d].0);
                    }
                    factors.push(ri);
                    for &d in &digits[pos..] {
                        factors.push(support[d].0);
                    }
                    if let Some(value) = a.get(&TensorWord::new(factors)) {
                        out = out.add(&value.scale(&(&c_x * rc)));
                    }
                }
            }
            if k == 0 {
                break;
            }
            let mut i = k;
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

/// Twists a morphism: `F^x` goes from the source twisted by `x` to the
/// target twisted by the pushforward of `x`, with components
///
/// ```text
/// (F^x)_n(a_1 ... a_n) = sum over p >= 0 of F_(n+p)(sh(x^p, a_1 ... a_n)).
/// ```
///
/// The same deletion-pattern evaluation applies; deleting all letters of
/// an entry contributes to the counit direction and is dropped. A strict
/// morphism is unchanged.
pub fn twist_morphism(f: &InftyMorphism, x: &Element) -> Result<InftyMorphism> {
    let source = twist(f.source(), x)?;
    let x_f = f.pushforward_element(x)?;
    let target = twist(f.target(), &x_f)?;
    let mut comps = MorphismComponents::new(f.source().space(), f.target().space());
    for m in f.components().arities() {
        for (z, value) in f.components().component(m).unwrap() {
            for (w, c) in deletion_patterns(x, z) {
                if w.is_empty() {
                    continue;
                }
                comps.accumulate(w, &value.scale(&c));
            }
        }
    }
    InftyMorphism::new(source.twisted, target.twisted, comps)
}

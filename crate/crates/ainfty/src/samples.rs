//! Ready-made structures and randomized generators for tests and
//! benchmarks.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{AInftyStructure, InftyMorphism};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::graded::{BasisVector, Element, GradedSpace};
use crate::tensor::{
    basis_words, coalgebra_morphism_apply, coderivation_apply, ComponentFamily,
    MorphismComponents, TensorElement, TensorWord, TruncationPolicy,
};

/// The smallest interesting curved structure: `u` in degree 0 of weight 1,
/// `v` in degree 1 of weight 2, curvature `Q_0(1) = v`, and
/// `Q_2(u, u) = -v`.
pub fn small_curved(field: FieldSpec) -> AInftyStructure {
    let s = GradedSpace::new(
        field,
        vec![BasisVector::new("u", 0, 1), BasisVector::new("v", 1, 2)],
    )
    .unwrap();
    let v = Element::basis_named(&s, "v").unwrap();
    AInftyStructure::from_entries(
        &s,
        [(TensorWord::empty(), v.clone()), (TensorWord::new([0, 0]), v.neg())],
    )
    .unwrap()
}

/// A structure whose shapes are fine but whose differential does not kill
/// the curvature: `Q_0(1) = v`, `Q_1(v) = w`. The arity-0 relation fails
/// with residual `w`.
pub fn incompatible_differential(field: FieldSpec) -> AInftyStructure {
    let s = GradedSpace::new(
        field,
        vec![BasisVector::new("v", 1, 1), BasisVector::new("w", 2, 1)],
    )
    .unwrap();
    let v = Element::basis_named(&s, "v").unwrap();
    let w = Element::basis_named(&s, "w").unwrap();
    AInftyStructure::from_entries(
        &s,
        [(TensorWord::empty(), v), (TensorWord::new([0]), w)],
    )
    .unwrap()
}

/// A random structure that is valid by layering: input letters `a*` have
/// weight 1, output letters `b*` have weight `max_arity`, and every
/// component sends words of input letters to combinations of output
/// letters. Any word containing an output letter is annihilated, so every
/// term of every Stasheff relation vanishes.
pub fn random_layered(
    field: FieldSpec,
    rng: &mut impl Rng,
    inputs: usize,
    max_arity: usize,
) -> AInftyStructure {
    assert!(max_arity >= 1 && inputs >= 1);
    let mut basis = Vec::new();
    for i in 0..inputs {
        basis.push(BasisVector::new(format!("a{}", i), rng.gen_range(-1..=1), 1));
    }
    // Output letters covering every degree a component value can need.
    let lo = -(max_arity as i64) + 1;
    let hi = max_arity as i64 + 1;
    let mut k = 0;
    for d in lo..=hi {
        for _ in 0..2 {
            basis.push(BasisVector::new(format!("b{}", k), d, max_arity as u32));
            k += 1;
        }
    }
    let space = GradedSpace::new(field, basis).unwrap();
    let mut family = ComponentFamily::new(&space, 1);
    for n in 0..=max_arity {
        for word in input_words(inputs, n) {
            if !rng.gen_bool(if n == 0 { 0.8 } else { 0.5 }) {
                continue;
            }
            let needed = word.degree(&space) + 1;
            let mut value = Element::zero(&space);
            for i in inputs as u32..space.dim() as u32 {
                if space.degree(i) == needed {
                    let c = field.from_i64(rng.gen_range(-2..=2));
                    value = value.add(&Element::basis(&space, i).scale(&c));
                }
            }
            family.set(word, value);
        }
    }
    AInftyStructure::new(family).unwrap()
}

/// A random nilpotent structure of dimension 4 together with an element
/// satisfying the Maurer-Cartan equation.
///
/// Input letters `a` (degree 0) and `c` (degree -1) have weight 1; output
/// letters `m` (degree 0) and `b` (degree 1) have weight 2. Components
/// send input words to output combinations, so the structure is layered
/// and every Stasheff relation vanishes termwise. The curvature is then
/// chosen as minus the rest of the curvature sum of `x = a`, which makes
/// `x` Maurer-Cartan by construction. The degree -1 letter feeds the
/// degree-0 part of simplex extensions, so transfer operators and
/// nonconstant Maurer-Cartan simplices show up at this dimension.
pub fn random_nilpotent_with_mc(
    field: FieldSpec,
    rng: &mut impl Rng,
) -> (AInftyStructure, Element) {
    let space = GradedSpace::new(
        field,
        vec![
            BasisVector::new("a", 0, 1),
            BasisVector::new("c", -1, 1),
            BasisVector::new("m", 0, 2),
            BasisVector::new("b", 1, 2),
        ],
    )
    .unwrap();
    let outputs = [2u32, 3u32];
    let mut family = ComponentFamily::new(&space, 1);
    for n in 1..=2 {
        for word in input_words(2, n) {
            if !rng.gen_bool(0.75) {
                continue;
            }
            let needed = word.degree(&space) + 1;
            let mut value = Element::zero(&space);
            for &o in &outputs {
                if space.degree(o) == needed {
                    let coeff = field.from_i64(rng.gen_range(-2..=2));
                    value = value.add(&Element::basis(&space, o).scale(&coeff));
                }
            }
            family.set(word, value);
        }
    }
    let x = Element::basis(&space, 0);
    let rest = family
        .apply_word(&TensorWord::new([0]))
        .add(&family.apply_word(&TensorWord::new([0, 0])));
    family.set(TensorWord::empty(), rest.neg());
    let a = AInftyStructure::new(family).unwrap();
    (a, x)
}

fn input_words(inputs: usize, len: usize) -> Vec<TensorWord> {
    if len == 0 {
        return vec![TensorWord::empty()];
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
            if (digits[i] as usize) < inputs {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Random degree-zero element with small integer coefficients.
pub fn random_degree_zero(space: &Arc<GradedSpace>, rng: &mut impl Rng) -> Element {
    let mut v = Element::zero(space);
    for i in space.indices_of_degree(0) {
        let c = space.field().from_i64(rng.gen_range(-2..=2));
        v = v.add(&Element::basis(space, i).scale(&c));
    }
    v
}

/// Random coalgebra-morphism components with identity linear part and
/// degree- and weight-respecting higher components.
pub fn random_unitriangular(
    space: &Arc<GradedSpace>,
    rng: &mut impl Rng,
    max_arity: usize,
) -> MorphismComponents {
    let mut f = MorphismComponents::identity(space);
    for n in 2..=max_arity {
        for w in basis_words(space, n) {
            if !rng.gen_bool(0.4) {
                continue;
            }
            let d = w.degree(space);
            let wt = w.weight(space);
            let mut value = Element::zero(space);
            for i in 0..space.dim() as u32 {
                if space.degree(i) == d && space.weight(i) >= wt {
                    let c = space.field().from_i64(rng.gen_range(-2..=2));
                    value = value.add(&Element::basis(space, i).scale(&c));
                }
            }
            if !value.is_zero() {
                f.set(w, value);
            }
        }
    }
    f
}

/// Conjugates a structure along an invertible coalgebra morphism with
/// identity linear part: solves `Q_B(F(w)) = F(Q_A(w))` for the components
/// of `Q_B`, arity by arity, by projecting to cogenerators. Since every
/// component value must have filtration weight at least that of its word,
/// the solved components vanish above the largest basis weight and the
/// recursion terminates there.
///
/// Returns the transported structure together with `F` as a morphism from
/// the input to it.
pub fn transport_structure(
    a: &AInftyStructure,
    f: MorphismComponents,
) -> Result<(AInftyStructure, InftyMorphism)> {
    let space = a.space();
    for i in 0..space.dim() as u32 {
        assert_eq!(
            f.apply_word(&TensorWord::new([i])),
            Element::basis(space, i),
            "transport needs an identity linear part"
        );
    }
    let max_weight = space
        .basis()
        .iter()
        .map(|b| b.weight())
        .max()
        .unwrap_or(0) as usize;
    let mut q_b = ComponentFamily::new(space, 1);
    q_b.set(TensorWord::empty(), a.algebra_curvature());
    for n in 1..=max_weight {
        let policy = TruncationPolicy::new(u32::MAX, n as u32 + 1);
        for w in basis_words(space, n) {
            let x = TensorElement::from_word(space, policy, w.clone());
            let qa_x = coderivation_apply(a.as_codifferential(), &x);
            let lhs = coalgebra_morphism_apply(&f, &qa_x).cogenerator_part();
            let fx = coalgebra_morphism_apply(&f, &x);
            // F(w) = w + shorter words; the shorter words only involve
            // components of Q_B already solved.
            let mut correction = Element::zero(space);
            for (y, c) in fx.terms() {
                if y.len() < n {
                    correction = correction.add(&q_b.apply_word(y).scale(c));
                }
            }
            q_b.set(w, lhs.sub(&correction));
        }
    }
    let b = AInftyStructure::new(q_b)?;
    let morphism = InftyMorphism::new(a.clone(), b.clone(), f)?;
    Ok((b, morphism))
}

//! Extension of scalars: the induced structure on `A ⊗ C` for a
//! finite-dimensional unital dg algebra C.
//!
//! The extended components are `CQ_0 = Q_0(1) ⊗ 1`, `CQ_1 = Q_1 ⊗ id +
//! id ⊗ d_C` (Koszul sign on the second summand), and for k >= 2
//! `CQ_k = Q_k ⊗ mu^(k)` with the Koszul sign of un-interleaving
//! `(A ⊗ C)^(k)` into `A^(k) ⊗ C^(k)`. Basis pairs are named "a#c" and
//! weigh as much as their A-letter, so the extension inherits the
//! filtration from A.
//!
//! When C is the normalized cochain algebra of a simplex, the vertex
//! evaluations, the contraction homotopy, and the faces and degeneracies
//! of the simplex all extend to operators on `A ⊗ C`; those drive the
//! Maurer-Cartan simplicial set.

use std::sync::Arc;

use crate::algebra::{AInftyStructure, InftyMorphism};
use crate::cochains::Cochain;
use crate::dga::DgAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::{koszul_sign, same_space, BasisVector, Element, GradedSpace};
use crate::tensor::{ComponentFamily, MorphismComponents, TensorWord};

#[derive(Clone, Debug)]
pub struct ExtendedAlgebra {
    base: AInftyStructure,
    coefficients: DgAlgebra,
    structure: AInftyStructure,
}

/// The Koszul sign of reordering `a_1 c_1 a_2 c_2 ...` into
/// `a_1 ... a_k c_1 ... c_k`.
fn interleave_sign(field: FieldSpec, a_degrees: &[i64], c_degrees: &[i64]) -> Scalar {
    let k = a_degrees.len();
    debug_assert_eq!(k, c_degrees.len());
    let mut degrees = Vec::with_capacity(2 * k);
    for i in 0..k {
        degrees.push(a_degrees[i]);
        degrees.push(c_degrees[i]);
    }
    let mut perm = Vec::with_capacity(2 * k);
    perm.extend((0..k).map(|i| 2 * i));
    perm.extend((0..k).map(|i| 2 * i + 1));
    field.sign(koszul_sign(&perm, &degrees).expect("interleaving is a permutation"))
}

impl ExtendedAlgebra {
    pub fn extend(base: &AInftyStructure, coefficients: &DgAlgebra) -> Result<ExtendedAlgebra> {
        assert_eq!(
            base.field(),
            coefficients.field(),
            "base and coefficients over different fields"
        );
        let field = base.field();
        let bspace = base.space();
        let dim_a = bspace.dim();
        let dim_c = coefficients.dim();
        let mut basis = Vec::with_capacity(dim_a * dim_c);
        for a in 0..dim_a as u32 {
            let va = bspace.vector(a);
            for c in 0..dim_c {
                basis.push(BasisVector::new(
                    format!("{}#{}", va.name(), coefficients.name(c)),
                    va.degree() + coefficients.degree(c),
                    va.weight(),
                ));
            }
        }
        let space = GradedSpace::new(field, basis)?;
        let pair = |a: u32, c: usize| -> u32 { a * dim_c as u32 + c as u32 };
        let mut family = ComponentFamily::new(&space, 1);

        let curvature = base.algebra_curvature();
        if !curvature.is_zero() {
            let mut value = Element::zero(&space);
            for (t, s) in curvature.terms() {
                for (&cu, su) in coefficients.unit() {
                    value.add_term(pair(t, cu), &(s * su));
                }
            }
            family.accumulate(TensorWord::empty(), &value);
        }

        if let Some(table) = base.component(1) {
            for (word, val) in table {
                let a = word.factors()[0];
                for c in 0..dim_c {
                    let mut value = Element::zero(&space);
                    for (t, s) in val.terms() {
                        value.add_term(pair(t, c), s);
                    }
                    family.accumulate(TensorWord::new([pair(a, c)]), &value);
                }
            }
        }
        for a in 0..dim_a as u32 {
            let sign = field.sign(if bspace.degree(a).rem_euclid(2) == 1 { -1 } else { 1 });
            for c in 0..dim_c {
                let dc = coefficients.differential(c);
                if dc.is_empty() {
                    continue;
                }
                let mut value = Element::zero(&space);
                for (&t, s) in dc {
                    value.add_term(pair(a, t), &(s * &sign));
                }
                family.accumulate(TensorWord::new([pair(a, c)]), &value);
            }
        }

        for k in base.arities().filter(|&k| k >= 2).collect::<Vec<_>>() {
            for (word, val) in base.component(k).unwrap() {
                let letters = word.factors();
                let a_degrees: Vec<i64> = letters.iter().map(|&a| bspace.degree(a)).collect();
                let mut ctuple = vec![0usize; k];
                loop {
                    let c_degrees: Vec<i64> =
                        ctuple.iter().map(|&c| coefficients.degree(c)).collect();
                    let sign = interleave_sign(field, &a_degrees, &c_degrees);
                    let mu = coefficients.product_many(&ctuple);
                    if !mu.is_empty() {
                        let mut value = Element::zero(&space);
                        for (t, s) in val.terms() {
                            for (&tc, sc) in &mu {
                                value.add_term(pair(t, tc), &(&(s * sc) * &sign));
                            }
                        }
                        if !value.is_zero() {
                            let eword =
                                TensorWord::new((0..k).map(|i| pair(letters[i], ctuple[i])));
                            family.accumulate(eword, &value);
                        }
                    }
                    let mut i = k;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        ctuple[i] += 1;
                        if ctuple[i] < dim_c {
                            break;
                        }
                        ctuple[i] = 0;
                    }
                    if ctuple.iter().all(|&c| c == 0) {
                        break;
                    }
                }
            }
        }

        let structure = AInftyStructure::new(family)?;
        Ok(ExtendedAlgebra {
            base: base.clone(),
            coefficients: coefficients.clone(),
            structure,
        })
    }

    /// Extension by the normalized cochains of the n-simplex.
    pub fn over_simplex(base: &AInftyStructure, n: usize) -> Result<ExtendedAlgebra> {
        ExtendedAlgebra::extend(base, &DgAlgebra::normalized_cochains(base.field(), n))
    }

    pub fn base(&self) -> &AInftyStructure {
        &self.base
    }

    pub fn coefficients(&self) -> &DgAlgebra {
        &self.coefficients
    }

    pub fn structure(&self) -> &AInftyStructure {
        &self.structure
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.structure.space()
    }

    pub fn field(&self) -> FieldSpec {
        self.structure.field()
    }

    pub fn simplex_dim(&self) -> Option<usize> {
        self.coefficients.simplex_dim()
    }

    pub fn pair_index(&self, a: u32, c: usize) -> u32 {
        a * self.coefficients.dim() as u32 + c as u32
    }

    pub fn pair_of(&self, idx: u32) -> (u32, usize) {
        let dim_c = self.coefficients.dim() as u32;
        (idx / dim_c, (idx % dim_c) as usize)
    }

    /// `a -> a ⊗ 1`.
    pub fn include_scalar(&self, x: &Element) -> Element {
        assert!(
            same_space(x.space(), self.base.space()),
            "element is not over the base space"
        );
        let mut out = Element::zero(self.space());
        for (a, s) in x.terms() {
            for (&cu, su) in self.coefficients.unit() {
                out.add_term(self.pair_index(a, cu), &(s * su));
            }
        }
        out
    }

    /// The extended `Q_1` applied to an element.
    pub fn differential(&self, x: &Element) -> Element {
        x.apply_basis_map(self.space(), |i| {
            self.structure.apply_word(&TensorWord::new([i]))
        })
    }

    fn simplex_dim_checked(&self, i: usize) -> Result<usize> {
        let n = self
            .coefficients
            .simplex_dim()
            .expect("vertex operators need simplex cochain coefficients");
        if i > n {
            return Err(Error::IndexRange { index: i, n });
        }
        Ok(n)
    }

    /// Applies `id ⊗ op` to the cochain halves, with an optional Koszul
    /// sign for moving a degree (-1) operator past the A-letter.
    fn map_coefficients<F>(
        &self,
        x: &Element,
        target: &ExtendedAlgebra,
        signed: bool,
        mut op: F,
    ) -> Result<Element>
    where
        F: FnMut(&Cochain) -> Result<Cochain>,
    {
        assert!(
            same_space(x.space(), self.space()),
            "element is not over the extended space"
        );
        let n = self
            .coefficients
            .simplex_dim()
            .expect("cochain operators need simplex cochain coefficients");
        let field = self.field();
        let mut out = Element::zero(target.space());
        for (idx, s) in x.terms() {
            let (a, c) = self.pair_of(idx);
            let tuple = self.coefficients.vertex_tuple(c).unwrap();
            let phi = Cochain::basis(field, n, &tuple).unwrap();
            let image = op(&phi)?;
            let mut scale = s.clone();
            if signed && self.base.space().degree(a).rem_euclid(2) == 1 {
                scale = &scale * &field.sign(-1);
            }
            for (tuple2, coeff) in image.terms() {
                let name: String = tuple2.iter().map(|d| d.to_string()).collect();
                let c2 = target
                    .coefficients
                    .index_of(&name)
                    .expect("image tuple names a basis cochain of the target");
                out.add_term(target.pair_index(a, c2), &(&scale * coeff));
            }
        }
        Ok(out)
    }

    /// The coefficient of vertex `i`, as an element of the base.
    pub fn vertex_part(&self, i: usize, x: &Element) -> Result<Element> {
        self.simplex_dim_checked(i)?;
        assert!(
            same_space(x.space(), self.space()),
            "element is not over the extended space"
        );
        let c_i = self
            .coefficients
            .index_of(&i.to_string())
            .expect("vertex cochain exists");
        let mut out = Element::zero(self.base.space());
        for (idx, s) in x.terms() {
            let (a, c) = self.pair_of(idx);
            if c == c_i {
                out.add_term(a, s);
            }
        }
        Ok(out)
    }

    /// `id ⊗ (evaluation at vertex i, followed by the unit)`.
    pub fn e_op(&self, i: usize, x: &Element) -> Result<Element> {
        self.simplex_dim_checked(i)?;
        Ok(self.include_scalar(&self.vertex_part(i, x)?))
    }

    /// `id ⊗ h^i` with a Koszul sign past odd A-letters.
    pub fn h_op(&self, i: usize, x: &Element) -> Result<Element> {
        self.simplex_dim_checked(i)?;
        self.map_coefficients(x, self, true, |phi| phi.contraction(i))
    }

    /// The transfer operator: the extended differential after `h^i`.
    pub fn r_op(&self, i: usize, x: &Element) -> Result<Element> {
        Ok(self.differential(&self.h_op(i, x)?))
    }

    /// `id ⊗ (restriction along the j-th face)`, landing one level down.
    pub fn face(&self, j: usize, x: &Element, target: &ExtendedAlgebra) -> Result<Element> {
        let n = self
            .coefficients
            .simplex_dim()
            .expect("faces need simplex cochain coefficients");
        assert_eq!(
            target.simplex_dim(),
            Some(n - 1),
            "face target is one simplex level down"
        );
        assert!(
            same_space(target.base.space(), self.base.space()),
            "face target has a different base"
        );
        self.map_coefficients(x, target, false, |phi| phi.face(j))
    }

    /// `id ⊗ (pullback along the j-th collapse)`, landing one level up.
    pub fn degeneracy(&self, j: usize, x: &Element, target: &ExtendedAlgebra) -> Result<Element> {
        let n = self
            .coefficients
            .simplex_dim()
            .expect("degeneracies need simplex cochain coefficients");
        assert_eq!(
            target.simplex_dim(),
            Some(n + 1),
            "degeneracy target is one simplex level up"
        );
        assert!(
            same_space(target.base.space(), self.base.space()),
            "degeneracy target has a different base"
        );
        self.map_coefficients(x, target, false, |phi| phi.degeneracy(j))
    }
}

/// Extends an infinity-morphism to the tensor products: component `l`
/// is `F_l ⊗ mu^(l)` with the same interleaving signs as the structure.
pub fn extend_morphism(
    f: &InftyMorphism,
    source: &ExtendedAlgebra,
    target: &ExtendedAlgebra,
) -> Result<InftyMorphism> {
    assert!(
        same_space(f.source().space(), source.base.space()),
        "morphism source does not match the extended source"
    );
    assert!(
        same_space(f.target().space(), target.base.space()),
        "morphism target does not match the extended target"
    );
    assert_eq!(
        source.coefficients, target.coefficients,
        "source and target extensions use different coefficients"
    );
    let field = f.source().field();
    let coefficients = &source.coefficients;
    let dim_c = coefficients.dim();
    let sspace = f.source().space();
    let mut comps = MorphismComponents::new(source.space(), target.space());
    for l in f.components().arities().collect::<Vec<_>>() {
        for (word, val) in f.components().component(l).unwrap() {
            let letters = word.factors();
            let a_degrees: Vec<i64> = letters.iter().map(|&a| sspace.degree(a)).collect();
            let mut ctuple = vec![0usize; l];
            loop {
                let c_degrees: Vec<i64> =
                    ctuple.iter().map(|&c| coefficients.degree(c)).collect();
                let sign = interleave_sign(field, &a_degrees, &c_degrees);
                let mu = coefficients.product_many(&ctuple);
                if !mu.is_empty() {
                    let mut value = Element::zero(target.space());
                    for (t, s) in val.terms() {
                        for (&tc, sc) in &mu {
                            value.add_term(target.pair_index(t, tc), &(&(s * sc) * &sign));
                        }
                    }
                    if !value.is_zero() {
                        let eword =
                            TensorWord::new((0..l).map(|i| source.pair_index(letters[i], ctuple[i])));
                        comps.accumulate(eword, &value);
                    }
                }
                let mut i = l;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    ctuple[i] += 1;
                    if ctuple[i] < dim_c {
                        break;
                    }
                    ctuple[i] = 0;
                }
                if ctuple.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
    }
    InftyMorphism::new(source.structure.clone(), target.structure.clone(), comps)
}

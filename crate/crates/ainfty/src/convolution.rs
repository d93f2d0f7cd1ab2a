//! Convolution structures on homomorphisms out of a conilpotent
//! coalgebra.
//!
//! A conilpotent coalgebra `C` (reduced coproduct, coradical weights)
//! and a dg algebra `A` combine into a shifted structure on the hom
//! space `Hom(C, A)`: the differential is the usual hom-complex one and
//! the binary operation convolves the coproduct with the product.  All
//! higher operations vanish, so the result is an honest dg Lie-style
//! kernel presented through the same [`AInftyStructure`] machinery as
//! everything else, and twisting, Maurer-Cartan elements, and horn
//! filling apply verbatim.
//!
//! Maurer-Cartan elements of the convolution structure are the same
//! thing as coalgebra maps from `C` to the bar construction of `A`;
//! [`ConvolutionAlgebra::mc_as_twisting`] checks both descriptions
//! independently and insists they agree.  The [`bar_coalgebra`]
//! constructor builds the bar side, truncated by word length, and
//! [`deformation_complex`] composes the two to produce the complex
//! controlling deformations of maps between two dg algebras.
//!
//! The [`IntervalCoalgebra`] is the counital three-dimensional interval
//! whose reduced form corepresents paths; tensoring with it
//! ([`interval_tensor`]) builds cylinders.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::AInftyStructure;
use crate::dga::{DgAlgebra, DgCombo};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::{same_space, BasisVector, Element, GradedSpace};
use crate::tensor::{ComponentFamily, TensorWord};
use crate::twist::is_mc;

/// Accumulate `coeff` onto `key`, dropping entries that cancel to zero.
fn table_add<K: Ord>(into: &mut BTreeMap<K, Scalar>, key: K, coeff: &Scalar) {
    if coeff.is_zero() {
        return;
    }
    match into.get_mut(&key) {
        Some(c) => {
            let sum = &*c + coeff;
            if sum.is_zero() {
                into.remove(&key);
            } else {
                *c = sum;
            }
        }
        None => {
            into.insert(key, coeff.clone());
        }
    }
}

fn parity(field: FieldSpec, exponent: i64) -> Scalar {
    if exponent.rem_euclid(2) == 0 {
        field.one()
    } else {
        field.sign(-1)
    }
}

/// A finite-dimensional coalgebra without counit, given by a reduced
/// coproduct and a differential on a weighted graded basis.
///
/// The weight of a basis vector records the stage of the coradical
/// filtration it lives in.  In the strict (conilpotent) regime every
/// coproduct term splits the weight of its source between its two
/// factors and the differential never raises weight, which makes
/// iterated coproducts vanish and guards every fixed-point computation
/// downstream.  The relaxed regime keeps all the algebraic axioms but
/// drops the weight discipline; such coalgebras can be inspected and
/// tensored but not fed to [`build_convolution`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConilpotentCoalgebra {
    space: Arc<GradedSpace>,
    coproduct: Vec<BTreeMap<(usize, usize), Scalar>>,
    differential: Vec<DgCombo>,
    conilpotent: bool,
}

impl ConilpotentCoalgebra {
    /// Validate raw tables and assemble a coalgebra.  With `strict`
    /// set, additionally require the coradical weight discipline and
    /// mark the result conilpotent.
    ///
    /// Panics if the table lengths do not match the basis or a term
    /// references an index out of range; those are programming errors,
    /// not data errors.
    pub fn from_tables(
        field: FieldSpec,
        basis: Vec<BasisVector>,
        coproduct: Vec<BTreeMap<(usize, usize), Scalar>>,
        differential: Vec<DgCombo>,
        strict: bool,
    ) -> Result<ConilpotentCoalgebra> {
        let space = GradedSpace::new(field, basis)?;
        let dim = space.dim();
        assert_eq!(coproduct.len(), dim, "one coproduct row per basis vector");
        assert_eq!(differential.len(), dim, "one differential row per basis vector");

        let coproduct: Vec<BTreeMap<(usize, usize), Scalar>> = coproduct
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        let differential: Vec<DgCombo> = differential
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            .collect();

        let deg = |i: usize| space.degree(i as u32);
        for (i, row) in coproduct.iter().enumerate() {
            for &(l, r) in row.keys() {
                assert!(l < dim && r < dim, "coproduct term out of range");
                if deg(l) + deg(r) != deg(i) {
                    return Err(Error::BadCoalgebraTable("degree-homogeneous"));
                }
            }
        }
        for (i, row) in differential.iter().enumerate() {
            for &t in row.keys() {
                assert!(t < dim, "differential term out of range");
                if deg(t) != deg(i) + 1 {
                    return Err(Error::BadCoalgebraTable("degree-homogeneous"));
                }
            }
        }

        for row in &differential {
            let mut square: DgCombo = BTreeMap::new();
            for (&t, c) in row {
                for (&u, d) in &differential[t] {
                    table_add(&mut square, u, &(c * d));
                }
            }
            if !square.is_empty() {
                return Err(Error::BadCoalgebraTable("a complex"));
            }
        }

        for row in &coproduct {
            let mut lhs: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            let mut rhs: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            for (&(l, r), c) in row {
                for (&(a, b), d) in &coproduct[l] {
                    table_add(&mut lhs, (a, b, r), &(c * d));
                }
                for (&(a, b), d) in &coproduct[r] {
                    table_add(&mut rhs, (l, a, b), &(c * d));
                }
            }
            if lhs != rhs {
                return Err(Error::BadCoalgebraTable("coassociative"));
            }
        }

        for (i, row) in coproduct.iter().enumerate() {
            let mut lhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            let mut rhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (&t, c) in &differential[i] {
                for (&(l, r), d) in &coproduct[t] {
                    table_add(&mut lhs, (l, r), &(c * d));
                }
            }
            for (&(l, r), c) in row {
                for (&t, d) in &differential[l] {
                    table_add(&mut rhs, (t, r), &(c * d));
                }
                let flip = parity(field, deg(l));
                for (&t, d) in &differential[r] {
                    table_add(&mut rhs, (l, t), &(&(c * d) * &flip));
                }
            }
            if lhs != rhs {
                return Err(Error::BadCoalgebraTable("a co-Leibniz pair"));
            }
        }

        if strict {
            let wt = |i: usize| space.weight(i as u32);
            for (i, row) in coproduct.iter().enumerate() {
                for &(l, r) in row.keys() {
                    if wt(l) + wt(r) > wt(i) {
                        return Err(Error::BadCoalgebraTable("conilpotent"));
                    }
                }
            }
            for (i, row) in differential.iter().enumerate() {
                for &t in row.keys() {
                    if wt(t) > wt(i) {
                        return Err(Error::BadCoalgebraTable("weight-filtered"));
                    }
                }
            }
        }

        Ok(ConilpotentCoalgebra {
            space,
            coproduct,
            differential,
            conilpotent: strict,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn name(&self, i: usize) -> &str {
        self.space.vector(i as u32).name()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i as u32)
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.space.weight(i as u32)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        Ok(self.space.index_of(name)? as usize)
    }

    /// Whether the strict weight discipline was verified at build time.
    pub fn is_conilpotent(&self) -> bool {
        self.conilpotent
    }

    pub fn max_weight(&self) -> u32 {
        (0..self.dim()).map(|i| self.weight(i)).max().unwrap_or(0)
    }

    /// Reduced coproduct terms of basis vector `i` as
    /// `(left, right) -> coefficient`.
    pub fn coproduct_terms(&self, i: usize) -> &BTreeMap<(usize, usize), Scalar> {
        &self.coproduct[i]
    }

    pub fn diff(&self, i: usize) -> &DgCombo {
        &self.differential[i]
    }

    /// The `(parts - 1)`-fold iterated reduced coproduct of basis
    /// vector `i`, as a sum of ordered tuples of basis indices.  By
    /// coassociativity the result does not depend on which slot each
    /// expansion step splits; this one always splits the first.
    pub fn iterated_coproduct(&self, i: usize, parts: usize) -> BTreeMap<Vec<usize>, Scalar> {
        assert!(parts >= 1, "a splitting has at least one part");
        let mut words: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        words.insert(vec![i], self.field().one());
        for _ in 1..parts {
            let mut next: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
            for (word, coeff) in &words {
                for (&(l, r), c) in &self.coproduct[word[0]] {
                    let mut expanded = Vec::with_capacity(word.len() + 1);
                    expanded.push(l);
                    expanded.push(r);
                    expanded.extend_from_slice(&word[1..]);
                    table_add(&mut next, expanded, &(coeff * c));
                }
            }
            words = next;
        }
        words
    }
}

/// Builder for [`ConilpotentCoalgebra`] values with named basis
/// vectors.
pub struct CoalgebraBuilder {
    field: FieldSpec,
    basis: Vec<BasisVector>,
    coproduct: Vec<(String, Scalar, String, String)>,
    differential: Vec<(String, Scalar, String)>,
}

impl CoalgebraBuilder {
    pub fn new(field: FieldSpec) -> CoalgebraBuilder {
        CoalgebraBuilder {
            field,
            basis: Vec::new(),
            coproduct: Vec::new(),
            differential: Vec::new(),
        }
    }

    pub fn basis(&mut self, name: &str, degree: i64, weight: u32) -> &mut Self {
        self.basis.push(BasisVector::new(name, degree, weight));
        self
    }

    /// Add `coeff * left (x) right` to the reduced coproduct of
    /// `source`.
    pub fn coproduct(&mut self, source: &str, coeff: Scalar, left: &str, right: &str) -> &mut Self {
        self.coproduct
            .push((source.into(), coeff, left.into(), right.into()));
        self
    }

    pub fn d(&mut self, source: &str, coeff: Scalar, target: &str) -> &mut Self {
        self.differential.push((source.into(), coeff, target.into()));
        self
    }

    fn assemble(&self, strict: bool) -> Result<ConilpotentCoalgebra> {
        let space = GradedSpace::new(self.field, self.basis.clone())?;
        let dim = space.dim();
        let mut coproduct: Vec<BTreeMap<(usize, usize), Scalar>> = vec![BTreeMap::new(); dim];
        let mut differential: Vec<DgCombo> = vec![BTreeMap::new(); dim];
        for (source, coeff, left, right) in &self.coproduct {
            let s = space.index_of(source)? as usize;
            let l = space.index_of(left)? as usize;
            let r = space.index_of(right)? as usize;
            table_add(&mut coproduct[s], (l, r), coeff);
        }
        for (source, coeff, target) in &self.differential {
            let s = space.index_of(source)? as usize;
            let t = space.index_of(target)? as usize;
            table_add(&mut differential[s], t, coeff);
        }
        ConilpotentCoalgebra::from_tables(
            self.field,
            self.basis.clone(),
            coproduct,
            differential,
            strict,
        )
    }

    /// Build and verify the strict weight discipline.
    pub fn build(&self) -> Result<ConilpotentCoalgebra> {
        self.assemble(true)
    }

    /// Build, checking every axiom except the weight discipline.
    pub fn build_relaxed(&self) -> Result<ConilpotentCoalgebra> {
        self.assemble(false)
    }
}

/// The counital interval: vertices `a` and `b` in chain degree 0 and an
/// edge `c` in chain degree 1 with boundary `b - a`.  The vertices are
/// group-like and the edge is a skew primitive between them.
///
/// This is the full counital coalgebra; [`IntervalCoalgebra::reduced`]
/// coaugments it at `a` and regrades cohomologically to produce the
/// two-dimensional coefficient coalgebra used for cylinders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalCoalgebra {
    field: FieldSpec,
}

impl IntervalCoalgebra {
    pub const NAMES: [&'static str; 3] = ["a", "b", "c"];

    pub fn new(field: FieldSpec) -> IntervalCoalgebra {
        let interval = IntervalCoalgebra { field };
        interval.validate();
        interval
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        3
    }

    pub fn name(&self, i: usize) -> &'static str {
        Self::NAMES[i]
    }

    /// Chain (simplicial) degree: 0 for the vertices, 1 for the edge.
    pub fn chain_degree(&self, i: usize) -> i64 {
        [0, 0, 1][i]
    }

    /// Full counital coproduct terms of basis vector `i`.
    pub fn coproduct(&self, i: usize) -> Vec<(usize, usize, Scalar)> {
        let one = || self.field.one();
        match i {
            0 => vec![(0, 0, one())],
            1 => vec![(1, 1, one())],
            2 => vec![(0, 2, one()), (2, 1, one())],
            _ => panic!("interval basis index out of range"),
        }
    }

    pub fn counit(&self, i: usize) -> Scalar {
        match i {
            0 | 1 => self.field.one(),
            2 => self.field.zero(),
            _ => panic!("interval basis index out of range"),
        }
    }

    /// Boundary terms of basis vector `i`; only the edge has any.
    pub fn differential(&self, i: usize) -> Vec<(usize, Scalar)> {
        match i {
            0 | 1 => vec![],
            2 => vec![(1, self.field.one()), (0, self.field.sign(-1))],
            _ => panic!("interval basis index out of range"),
        }
    }

    /// Check coassociativity, the counit law on both sides, `d^2 = 0`,
    /// and the co-Leibniz rule on the fixed tables.  The data is
    /// constant, so a failure here is a bug, not bad input.
    pub fn validate(&self) {
        let dim = self.dim();
        for i in 0..dim {
            for (l, r, c) in self.coproduct(i) {
                assert_eq!(
                    self.chain_degree(l) + self.chain_degree(r),
                    self.chain_degree(i),
                    "interval coproduct must preserve degree"
                );
                assert!(!c.is_zero());
            }
        }
        for i in 0..dim {
            let mut from_left: DgCombo = BTreeMap::new();
            let mut from_right: DgCombo = BTreeMap::new();
            for (l, r, c) in self.coproduct(i) {
                table_add(&mut from_left, r, &(&self.counit(l) * &c));
                table_add(&mut from_right, l, &(&self.counit(r) * &c));
            }
            let expect: DgCombo = BTreeMap::from([(i, self.field.one())]);
            assert_eq!(from_left, expect, "counit law fails on the left");
            assert_eq!(from_right, expect, "counit law fails on the right");
        }
        for i in 0..dim {
            let mut lhs: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            let mut rhs: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            for (l, r, c) in self.coproduct(i) {
                for (a, b, d) in self.coproduct(l) {
                    table_add(&mut lhs, (a, b, r), &(&c * &d));
                }
                for (a, b, d) in self.coproduct(r) {
                    table_add(&mut rhs, (l, a, b), &(&c * &d));
                }
            }
            assert_eq!(lhs, rhs, "interval coproduct is not coassociative");
        }
        for i in 0..dim {
            let mut square: DgCombo = BTreeMap::new();
            for (t, c) in self.differential(i) {
                for (u, d) in self.differential(t) {
                    table_add(&mut square, u, &(&c * &d));
                }
            }
            assert!(square.is_empty(), "interval boundary must square to zero");
        }
        for i in 0..dim {
            let mut lhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            let mut rhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (t, c) in self.differential(i) {
                for (l, r, d) in self.coproduct(t) {
                    table_add(&mut lhs, (l, r), &(&c * &d));
                }
            }
            for (l, r, c) in self.coproduct(i) {
                for (t, d) in self.differential(l) {
                    table_add(&mut rhs, (t, r), &(&c * &d));
                }
                let flip = parity(self.field, self.chain_degree(l));
                for (t, d) in self.differential(r) {
                    table_add(&mut rhs, (l, t), &(&(&c * &d) * &flip));
                }
            }
            assert_eq!(lhs, rhs, "interval boundary is not a coderivation");
        }
    }

    /// Coaugment at the initial vertex `a` and pass to cohomological
    /// degrees.  The result has a group-like `e` (the terminal vertex
    /// shifted by the coaugmentation) in degree 0 and the edge `c` in
    /// degree -1 with `d(c) = e`; the group-like makes it non-strict,
    /// so it comes back relaxed.
    pub fn reduced(&self) -> ConilpotentCoalgebra {
        let one = self.field.one();
        let mut b = CoalgebraBuilder::new(self.field);
        b.basis("e", 0, 1)
            .basis("c", -1, 1)
            .coproduct("e", one.clone(), "e", "e")
            .coproduct("c", one.clone(), "c", "e")
            .d("c", one, "e");
        b.build_relaxed()
            .expect("the reduced interval satisfies the coalgebra axioms")
    }
}

/// Tensor a coalgebra with the reduced interval, producing its
/// cylinder.
///
/// For each basis vector `u` of `c` the cylinder has `u*a` (the copy at
/// the initial end), `u*e`, and `u*c`, plus one bare pair `1*e`, `1*c`
/// for the interval factor itself.  Koszul signs enter whenever the
/// edge `c` (degree -1) moves past a coalgebra factor.  The group-like
/// `1*e` keeps the cylinder non-strict, so the result is built relaxed
/// and cannot itself feed [`build_convolution`]; all other axioms are
/// revalidated on every call.
pub fn interval_tensor(c: &ConilpotentCoalgebra) -> ConilpotentCoalgebra {
    let field = c.field();
    let dim = c.dim();
    let one = field.one();
    let ia = |u: usize| 3 * u;
    let ie = |u: usize| 3 * u + 1;
    let ic = |u: usize| 3 * u + 2;
    let be = 3 * dim;
    let bc = 3 * dim + 1;

    let mut basis = Vec::with_capacity(3 * dim + 2);
    for u in 0..dim {
        let (name, degree, weight) = (c.name(u), c.degree(u), c.weight(u));
        basis.push(BasisVector::new(format!("{name}*a"), degree, weight));
        basis.push(BasisVector::new(format!("{name}*e"), degree, weight));
        basis.push(BasisVector::new(format!("{name}*c"), degree - 1, weight));
    }
    basis.push(BasisVector::new("1*e", 0, 1));
    basis.push(BasisVector::new("1*c", -1, 1));

    let mut coproduct: Vec<BTreeMap<(usize, usize), Scalar>> =
        vec![BTreeMap::new(); 3 * dim + 2];
    let mut differential: Vec<DgCombo> = vec![BTreeMap::new(); 3 * dim + 2];

    for u in 0..dim {
        let sign_u = parity(field, c.degree(u));

        let row = &mut coproduct[ia(u)];
        for (&(l, r), coeff) in c.coproduct_terms(u) {
            table_add(row, (ia(l), ia(r)), coeff);
        }

        let row = &mut coproduct[ie(u)];
        table_add(row, (ia(u), be), &one);
        table_add(row, (ie(u), be), &one);
        table_add(row, (be, ia(u)), &one);
        table_add(row, (be, ie(u)), &one);
        for (&(l, r), coeff) in c.coproduct_terms(u) {
            table_add(row, (ia(l), ie(r)), coeff);
            table_add(row, (ie(l), ia(r)), coeff);
            table_add(row, (ie(l), ie(r)), coeff);
        }

        let row = &mut coproduct[ic(u)];
        table_add(row, (ia(u), bc), &one);
        table_add(row, (ic(u), be), &one);
        table_add(row, (bc, ia(u)), &sign_u);
        table_add(row, (bc, ie(u)), &sign_u);
        for (&(l, r), coeff) in c.coproduct_terms(u) {
            let flip = parity(field, c.degree(r));
            table_add(row, (ia(l), ic(r)), coeff);
            table_add(row, (ic(l), ia(r)), &(coeff * &flip));
            table_add(row, (ic(l), ie(r)), &(coeff * &flip));
        }

        for (&t, coeff) in c.diff(u) {
            table_add(&mut differential[ia(u)], ia(t), coeff);
            table_add(&mut differential[ie(u)], ie(t), coeff);
            table_add(&mut differential[ic(u)], ic(t), coeff);
        }
        table_add(&mut differential[ic(u)], ie(u), &sign_u);
    }
    table_add(&mut coproduct[be], (be, be), &one);
    table_add(&mut coproduct[bc], (bc, be), &one);
    table_add(&mut differential[bc], be, &one);

    ConilpotentCoalgebra::from_tables(field, basis, coproduct, differential, false)
        .expect("the cylinder of a valid coalgebra is valid")
}

/// The bar construction of a dg algebra, truncated at a maximum word
/// length.
///
/// Words in the (desuspended) basis of `a` of length 1 through
/// `max_weight` form the basis, named by joining letters with `|`.  A
/// word's degree is the sum of its letters' degrees minus its length
/// and its weight is its length.  The coproduct deconcatenates and the
/// differential applies `d` to one letter or multiplies two adjacent
/// letters, with the usual desuspension signs.  Truncation is exact
/// because both operations only ever shorten or preserve words.
///
/// The underlying algebra is taken without augmentation, so the unit is
/// an ordinary letter.
pub fn bar_coalgebra(a: &DgAlgebra, max_weight: u32) -> Result<ConilpotentCoalgebra> {
    assert!(max_weight >= 1, "bar words have at least one letter");
    let field = a.field();
    let letters = a.dim();

    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut current: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_weight {
        let mut next = Vec::with_capacity(current.len() * letters);
        for word in &current {
            for letter in 0..letters {
                let mut w = word.clone();
                w.push(letter);
                index.insert(w.clone(), words.len());
                words.push(w.clone());
                next.push(w);
            }
        }
        current = next;
    }

    let mut basis = Vec::with_capacity(words.len());
    for word in &words {
        let name = word
            .iter()
            .map(|&l| a.name(l))
            .collect::<Vec<_>>()
            .join("|");
        let degree: i64 = word.iter().map(|&l| a.degree(l) - 1).sum();
        basis.push(BasisVector::new(name, degree, word.len() as u32));
    }

    let mut coproduct: Vec<BTreeMap<(usize, usize), Scalar>> =
        vec![BTreeMap::new(); words.len()];
    let mut differential: Vec<DgCombo> = vec![BTreeMap::new(); words.len()];
    let one = field.one();
    for (w, word) in words.iter().enumerate() {
        for cut in 1..word.len() {
            let left = index[&word[..cut].to_vec()];
            let right = index[&word[cut..].to_vec()];
            table_add(&mut coproduct[w], (left, right), &one);
        }

        let mut prefix_degree: i64 = 0;
        for p in 0..word.len() {
            let passage = parity(field, prefix_degree);
            for (&t, coeff) in a.differential(word[p]) {
                let mut replaced = word.clone();
                replaced[p] = t;
                let sign = &passage * &field.sign(-1);
                table_add(&mut differential[w], index[&replaced], &(&sign * coeff));
            }
            if p + 1 < word.len() {
                let merge_sign = &passage * &parity(field, a.degree(word[p]));
                for (&t, coeff) in a.product(word[p], word[p + 1]) {
                    let mut merged = Vec::with_capacity(word.len() - 1);
                    merged.extend_from_slice(&word[..p]);
                    merged.push(t);
                    merged.extend_from_slice(&word[p + 2..]);
                    table_add(&mut differential[w], index[&merged], &(&merge_sign * coeff));
                }
            }
            prefix_degree += a.degree(word[p]) - 1;
        }
    }

    ConilpotentCoalgebra::from_tables(field, basis, coproduct, differential, true)
}

/// The convolution structure on `Hom(C, A)` for a conilpotent
/// coalgebra `C` and a dg algebra `A`, truncated at a coradical weight
/// cutoff.
///
/// Basis homomorphisms send one coalgebra basis vector into one algebra
/// basis vector and are named `c>a`.  The differential is the
/// hom-complex one and the binary operation pushes the reduced
/// coproduct through the product; no higher operations arise, and
/// degree-0 Maurer-Cartan elements are exactly the twisting morphisms
/// from `C` to `A`.
#[derive(Clone, Debug)]
pub struct ConvolutionAlgebra {
    coalgebra: ConilpotentCoalgebra,
    algebra: DgAlgebra,
    weight_cutoff: u32,
    pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), u32>,
    structure: AInftyStructure,
}

/// Build the convolution structure of `coalgebra` and `algebra`,
/// keeping homomorphisms out of coalgebra vectors of weight at most
/// `weight_cutoff`.  The discarded homomorphisms form an ideal, so the
/// truncation is again a valid structure; the constructor re-verifies
/// the Stasheff relations regardless.  Fails unless the coalgebra was
/// built with the strict weight discipline.
pub fn build_convolution(
    coalgebra: &ConilpotentCoalgebra,
    algebra: &DgAlgebra,
    weight_cutoff: u32,
) -> Result<ConvolutionAlgebra> {
    assert_eq!(
        coalgebra.field(),
        algebra.field(),
        "coalgebra and algebra over different fields"
    );
    assert!(weight_cutoff >= 1, "weight cutoff must keep some homs");
    if !coalgebra.is_conilpotent() {
        return Err(Error::BadCoalgebraTable("conilpotent"));
    }
    let field = coalgebra.field();

    let mut pairs = Vec::new();
    let mut basis = Vec::new();
    for i in 0..coalgebra.dim() {
        if coalgebra.weight(i) > weight_cutoff {
            continue;
        }
        for j in 0..algebra.dim() {
            pairs.push((i, j));
            basis.push(BasisVector::new(
                format!("{}>{}", coalgebra.name(i), algebra.name(j)),
                algebra.degree(j) - coalgebra.degree(i) - 1,
                coalgebra.weight(i),
            ));
        }
    }
    let space = GradedSpace::new(field, basis)?;
    let index: BTreeMap<(usize, usize), u32> = pairs
        .iter()
        .enumerate()
        .map(|(v, &pair)| (pair, v as u32))
        .collect();

    let mut family = ComponentFamily::new(&space, 1);

    for (v, &(i, j)) in pairs.iter().enumerate() {
        let mut value = Element::zero(&space);
        for (&t, coeff) in algebra.differential(j) {
            value.add_term(index[&(i, t)], coeff);
        }
        let sign = parity(field, space.degree(v as u32));
        for k in 0..coalgebra.dim() {
            if coalgebra.weight(k) > weight_cutoff {
                continue;
            }
            if let Some(coeff) = coalgebra.diff(k).get(&i) {
                value.add_term(index[&(k, j)], &(coeff * &sign));
            }
        }
        if !value.is_zero() {
            family.set(TensorWord::new([v as u32]), value);
        }
    }

    for (v, &(i, j)) in pairs.iter().enumerate() {
        let deg_v = space.degree(v as u32);
        for (w, &(k, l)) in pairs.iter().enumerate() {
            let deg_w = space.degree(w as u32);
            let sign = parity(field, deg_v + (deg_w + 1) * coalgebra.degree(i));
            let product = algebra.product(j, l);
            let mut value = Element::zero(&space);
            for m in 0..coalgebra.dim() {
                if coalgebra.weight(m) > weight_cutoff {
                    continue;
                }
                if let Some(gamma) = coalgebra.coproduct_terms(m).get(&(i, k)) {
                    for (&p, pi) in product {
                        value.add_term(index[&(m, p)], &(&(gamma * pi) * &sign));
                    }
                }
            }
            if !value.is_zero() {
                family.set(TensorWord::new([v as u32, w as u32]), value);
            }
        }
    }

    let structure = AInftyStructure::new(family)?;
    Ok(ConvolutionAlgebra {
        coalgebra: coalgebra.clone(),
        algebra: algebra.clone(),
        weight_cutoff,
        pairs,
        index,
        structure,
    })
}

impl ConvolutionAlgebra {
    pub fn structure(&self) -> &AInftyStructure {
        &self.structure
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.structure.space()
    }

    pub fn coalgebra(&self) -> &ConilpotentCoalgebra {
        &self.coalgebra
    }

    pub fn algebra(&self) -> &DgAlgebra {
        &self.algebra
    }

    pub fn weight_cutoff(&self) -> u32 {
        self.weight_cutoff
    }

    /// The coalgebra and algebra indices a hom basis vector connects.
    pub fn hom_pair(&self, v: u32) -> (usize, usize) {
        self.pairs[v as usize]
    }

    pub fn hom_index(&self, coalgebra_index: usize, algebra_index: usize) -> Option<u32> {
        self.index.get(&(coalgebra_index, algebra_index)).copied()
    }

    /// Read an element of the hom space as an actual map: for each
    /// coalgebra basis vector the combination of algebra basis vectors
    /// it is sent to.  Vectors beyond the weight cutoff go to zero.
    pub fn hom_values(&self, x: &Element) -> Vec<DgCombo> {
        assert!(
            same_space(x.space(), self.space()),
            "hom element over a different space"
        );
        let mut values: Vec<DgCombo> = vec![BTreeMap::new(); self.coalgebra.dim()];
        for (v, coeff) in x.terms() {
            let (i, j) = self.pairs[v as usize];
            table_add(&mut values[i], j, coeff);
        }
        values
    }

    /// Whether the transpose of `x` against the bar construction of the
    /// algebra is a map of dg coalgebras.
    ///
    /// The transpose of a degree-0 hom `tau` sends a coalgebra vector
    /// to the sum over all iterated coproduct splittings of the word of
    /// `tau`-images of the parts.  This routine builds that map
    /// explicitly, truncating both sides at the weight cutoff, and then
    /// checks comultiplicativity and the chain condition term by term.
    /// It shares no code with the Maurer-Cartan check; the two are
    /// compared in [`ConvolutionAlgebra::mc_as_twisting`].
    pub fn transpose_is_chain_map(&self, x: &Element) -> Result<bool> {
        assert!(
            same_space(x.space(), self.space()),
            "hom element over a different space"
        );
        if !x.is_zero() && x.homogeneous_degree() != Some(0) {
            return Err(Error::WrongDegree {
                expected: 0,
                found: x.homogeneous_degree(),
            });
        }
        let bar = bar_coalgebra(&self.algebra, self.weight_cutoff)?;
        let tau = self.hom_values(x);
        let dim = self.coalgebra.dim();
        let within: Vec<usize> = (0..dim)
            .filter(|&i| self.coalgebra.weight(i) <= self.weight_cutoff)
            .collect();

        let mut transpose: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); dim];
        for &i in &within {
            let mut image: BTreeMap<usize, Scalar> = BTreeMap::new();
            for parts in 1..=self.coalgebra.weight(i) as usize {
                for (split, gamma) in self.coalgebra.iterated_coproduct(i, parts) {
                    let supports: Vec<Vec<(usize, Scalar)>> = split
                        .iter()
                        .map(|&c| tau[c].iter().map(|(&a, v)| (a, v.clone())).collect())
                        .collect();
                    if supports.iter().any(Vec::is_empty) {
                        continue;
                    }
                    let mut choice = vec![0usize; parts];
                    loop {
                        let mut coeff = gamma.clone();
                        let mut letters = Vec::with_capacity(parts);
                        for (slot, &pick) in choice.iter().enumerate() {
                            let (letter, ref scale) = supports[slot][pick];
                            letters.push(letter);
                            coeff = &coeff * scale;
                        }
                        let name = letters
                            .iter()
                            .map(|&l| self.algebra.name(l))
                            .collect::<Vec<_>>()
                            .join("|");
                        let word = bar
                            .index_of(&name)
                            .expect("bar words as long as the cutoff exist");
                        table_add(&mut image, word, &coeff);

                        let mut slot = parts;
                        loop {
                            if slot == 0 {
                                break;
                            }
                            slot -= 1;
                            choice[slot] += 1;
                            if choice[slot] < supports[slot].len() {
                                break;
                            }
                            choice[slot] = 0;
                        }
                        if choice.iter().all(|&p| p == 0) {
                            break;
                        }
                    }
                }
            }
            transpose[i] = image;
        }

        for &i in &within {
            let mut lhs: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (&t, coeff) in self.coalgebra.diff(i) {
                for (&word, scale) in &transpose[t] {
                    table_add(&mut lhs, word, &(coeff * scale));
                }
            }
            let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (&word, coeff) in &transpose[i] {
                for (&t, scale) in bar.diff(word) {
                    table_add(&mut rhs, t, &(coeff * scale));
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }

        for &i in &within {
            let mut lhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (&word, coeff) in &transpose[i] {
                for (&(l, r), scale) in bar.coproduct_terms(word) {
                    table_add(&mut lhs, (l, r), &(coeff * scale));
                }
            }
            let mut rhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (&(l, r), coeff) in self.coalgebra.coproduct_terms(i) {
                for (&wl, sl) in &transpose[l] {
                    for (&wr, sr) in &transpose[r] {
                        table_add(&mut rhs, (wl, wr), &(&(coeff * sl) * sr));
                    }
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }

        Ok(true)
    }

    /// Whether `x` is Maurer-Cartan, checked through two independent
    /// routes: the curvature of the convolution structure, and the
    /// transpose against the bar construction.  The routes must agree;
    /// a mismatch is a bug in one of them, not a property of `x`.
    pub fn mc_as_twisting(&self, x: &Element) -> Result<bool> {
        let algebraic = is_mc(&self.structure, x)?;
        let transposed = self.transpose_is_chain_map(x)?;
        assert_eq!(
            algebraic, transposed,
            "Maurer-Cartan and bar-transpose checks disagree"
        );
        Ok(algebraic)
    }
}

/// The complex controlling deformations of maps from `source` to
/// `target`: the convolution structure on homs out of the bar
/// construction of the source, truncated at word length `weight_cutoff`
/// on both sides.  Its degree-0 Maurer-Cartan elements are the
/// morphisms of algebras up to that stage; strict algebra maps give
/// solutions concentrated on one-letter words.
pub fn deformation_complex(
    source: &DgAlgebra,
    target: &DgAlgebra,
    weight_cutoff: u32,
) -> Result<ConvolutionAlgebra> {
    let bar = bar_coalgebra(source, weight_cutoff)?;
    build_convolution(&bar, target, weight_cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{DgAlgebra, DgAlgebraBuilder};

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    /// Two-stage coalgebra: a primitive `c1` and a `c2` whose reduced
    /// coproduct is `c1 (x) c1`.
    fn two_stage(field: FieldSpec) -> ConilpotentCoalgebra {
        let mut b = CoalgebraBuilder::new(field);
        b.basis("c1", -1, 1)
            .basis("c2", -2, 2)
            .coproduct("c2", field.one(), "c1", "c1");
        b.build().unwrap()
    }

    /// Unital algebra on `e, x, y` with `d(x) = y` and all products of
    /// non-unit vectors zero.
    fn nilpotent_line(field: FieldSpec) -> DgAlgebra {
        let mut b = DgAlgebraBuilder::new(field);
        b.basis("e", 0)
            .basis("x", 0)
            .basis("y", 1)
            .unit_term("e", field.one())
            .mul("e", "e", field.one(), "e")
            .mul("e", "x", field.one(), "x")
            .mul("x", "e", field.one(), "x")
            .mul("e", "y", field.one(), "y")
            .mul("y", "e", field.one(), "y")
            .d("x", field.one(), "y");
        b.build().unwrap()
    }

    #[test]
    fn builder_rejects_tables_that_fail_each_axiom() {
        let field = q();
        let one = field.one();

        let mut b = CoalgebraBuilder::new(field);
        b.basis("x", 1, 3)
            .basis("y", 0, 1)
            .coproduct("x", one.clone(), "x", "y");
        let err = b.build_relaxed().unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("coassociative")));

        let mut b = CoalgebraBuilder::new(field);
        b.basis("p", 0, 2)
            .basis("q", 0, 1)
            .basis("r", 1, 2)
            .basis("s", 1, 1)
            .coproduct("p", one.clone(), "q", "q")
            .coproduct("r", one.clone(), "q", "s")
            .d("p", one.clone(), "r");
        let err = b.build_relaxed().unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("a co-Leibniz pair")));

        let mut b = CoalgebraBuilder::new(field);
        b.basis("x", 0, 1)
            .basis("y", 1, 1)
            .basis("z", 2, 1)
            .d("x", one.clone(), "y")
            .d("y", one.clone(), "z");
        let err = b.build_relaxed().unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("a complex")));

        let mut b = CoalgebraBuilder::new(field);
        b.basis("x", 1, 1)
            .basis("y", 0, 1)
            .coproduct("x", one.clone(), "y", "y");
        let err = b.build_relaxed().unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("degree-homogeneous")));

        let mut b = CoalgebraBuilder::new(field);
        b.basis("e", 0, 1).coproduct("e", one.clone(), "e", "e");
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("conilpotent")));
        assert!(!b.build_relaxed().unwrap().is_conilpotent());

        let mut b = CoalgebraBuilder::new(field);
        b.basis("a", 0, 1)
            .basis("b", 1, 2)
            .d("a", one.clone(), "b");
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("weight-filtered")));
        assert!(b.build_relaxed().is_ok());

        let mut b = CoalgebraBuilder::new(field);
        b.basis("x", 0, 1).d("x", one, "missing");
        assert!(matches!(b.build(), Err(Error::UnknownBasis(_))));
    }

    #[test]
    fn strict_builds_mark_conilpotency_and_resolve_names() {
        let c = two_stage(q());
        assert!(c.is_conilpotent());
        assert_eq!(c.dim(), 2);
        assert_eq!(c.index_of("c2").unwrap(), 1);
        assert_eq!(c.degree(1), -2);
        assert_eq!(c.weight(1), 2);
        assert_eq!(c.max_weight(), 2);
        assert_eq!(c.diff(0).len(), 0);
        let row = c.coproduct_terms(1);
        assert_eq!(row.len(), 1);
        assert!(row.get(&(0, 0)).unwrap().is_one());
    }

    #[test]
    fn iterated_coproducts_expand_to_full_splittings() {
        let c = two_stage(q());
        let one_part = c.iterated_coproduct(1, 1);
        assert_eq!(one_part, BTreeMap::from([(vec![1], q().one())]));
        let two_parts = c.iterated_coproduct(1, 2);
        assert_eq!(two_parts, BTreeMap::from([(vec![0, 0], q().one())]));
        assert!(c.iterated_coproduct(1, 3).is_empty());

        let bar = bar_coalgebra(&DgAlgebra::dual_numbers(q()), 3).unwrap();
        let ete = bar.index_of("e|t|e").unwrap();
        let splits = bar.iterated_coproduct(ete, 2);
        let expected = BTreeMap::from([
            (
                vec![bar.index_of("e").unwrap(), bar.index_of("t|e").unwrap()],
                q().one(),
            ),
            (
                vec![bar.index_of("e|t").unwrap(), bar.index_of("e").unwrap()],
                q().one(),
            ),
        ]);
        assert_eq!(splits, expected);
        let triple = bar.iterated_coproduct(ete, 3);
        let e = bar.index_of("e").unwrap();
        let t = bar.index_of("t").unwrap();
        assert_eq!(triple, BTreeMap::from([(vec![e, t, e], q().one())]));
    }

    #[test]
    fn interval_tables_satisfy_the_counital_axioms() {
        let interval = IntervalCoalgebra::new(q());
        interval.validate();
        assert_eq!(interval.dim(), 3);
        assert_eq!(interval.name(2), "c");
        assert_eq!(interval.chain_degree(2), 1);
        assert!(interval.counit(0).is_one());
        assert!(interval.counit(2).is_zero());
        let edge = interval.coproduct(2);
        assert_eq!(edge.len(), 2);
        assert_eq!(edge[0].0, 0);
        assert_eq!(edge[0].1, 2);
        assert_eq!(edge[1].0, 2);
        assert_eq!(edge[1].1, 1);
        let boundary = interval.differential(2);
        assert_eq!(boundary[0], (1, q().one()));
        assert_eq!(boundary[1], (0, q().sign(-1)));
    }

    #[test]
    fn the_reduced_interval_has_a_group_like_end() {
        let reduced = IntervalCoalgebra::new(q()).reduced();
        assert!(!reduced.is_conilpotent());
        assert_eq!(reduced.dim(), 2);
        let e = reduced.index_of("e").unwrap();
        let c = reduced.index_of("c").unwrap();
        assert_eq!(reduced.degree(e), 0);
        assert_eq!(reduced.degree(c), -1);
        assert_eq!(
            reduced.coproduct_terms(e),
            &BTreeMap::from([((e, e), q().one())])
        );
        assert_eq!(
            reduced.coproduct_terms(c),
            &BTreeMap::from([((c, e), q().one())])
        );
        assert_eq!(reduced.diff(c), &BTreeMap::from([(e, q().one())]));

        let err = build_convolution(&reduced, &DgAlgebra::unit_only(q()), 2).unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("conilpotent")));
    }

    #[test]
    fn bar_words_carry_deconcatenation_and_the_multiplication_differential() {
        let bar = bar_coalgebra(&DgAlgebra::dual_numbers(q()), 3).unwrap();
        assert!(bar.is_conilpotent());
        assert_eq!(bar.dim(), 2 + 4 + 8);
        let e = bar.index_of("e").unwrap();
        let t = bar.index_of("t").unwrap();
        let ee = bar.index_of("e|e").unwrap();
        let et = bar.index_of("e|t").unwrap();
        let tt = bar.index_of("t|t").unwrap();
        assert_eq!(bar.degree(e), -1);
        assert_eq!(bar.degree(et), -2);
        assert_eq!(bar.weight(et), 2);

        assert_eq!(
            bar.coproduct_terms(bar.index_of("e|t|e").unwrap()),
            &BTreeMap::from([
                ((e, bar.index_of("t|e").unwrap()), q().one()),
                ((et, e), q().one()),
            ])
        );
        assert!(bar.coproduct_terms(e).is_empty());

        assert_eq!(bar.diff(ee), &BTreeMap::from([(e, q().one())]));
        assert_eq!(bar.diff(et), &BTreeMap::from([(t, q().one())]));
        assert!(bar.diff(tt).is_empty());
        assert!(bar.diff(bar.index_of("e|e|e").unwrap()).is_empty());
    }

    #[test]
    fn convolution_structure_of_a_two_stage_coalgebra() {
        let c = two_stage(q());
        let conv = build_convolution(&c, &DgAlgebra::unit_only(q()), 2).unwrap();
        let structure = conv.structure();
        let space = structure.space();
        assert_eq!(space.dim(), 2);
        let f1 = Element::basis_named(space, "c1>e").unwrap();
        let f2 = Element::basis_named(space, "c2>e").unwrap();
        assert_eq!(space.degree(space.index_of("c1>e").unwrap()), 0);
        assert_eq!(space.degree(space.index_of("c2>e").unwrap()), 1);

        assert_eq!(structure.max_arity(), 2);
        assert!(structure.algebra_curvature().is_zero());
        assert!(structure.apply_power(&f1, 1).is_zero());
        assert_eq!(structure.apply_power(&f1, 2), f2.neg());

        assert_eq!(conv.hom_pair(0), (0, 0));
        assert_eq!(conv.hom_index(1, 0), Some(1));
        let values = conv.hom_values(&f1);
        assert_eq!(values[0], BTreeMap::from([(0, q().one())]));
        assert!(values[1].is_empty());

        let conv3 = build_convolution(&two_stage(f(3)), &DgAlgebra::unit_only(f(3)), 2).unwrap();
        let space3 = conv3.space();
        let mut flat = 0;
        for value in f(3).enumerate().unwrap() {
            let x = Element::from_terms(space3, [(0, value)]);
            if conv3.mc_as_twisting(&x).unwrap() {
                flat += 1;
            }
        }
        assert_eq!(flat, 1);
    }

    #[test]
    fn primitive_coalgebras_give_complexes_with_zero_products() {
        let field = f(3);
        let mut b = CoalgebraBuilder::new(field);
        b.basis("c1", -1, 1);
        let c = b.build().unwrap();

        let conv = build_convolution(&c, &nilpotent_line(field), 1).unwrap();
        let structure = conv.structure();
        let space = structure.space();
        assert_eq!(space.dim(), 3);
        assert_eq!(structure.max_arity(), 1);

        let fx = Element::basis_named(space, "c1>x").unwrap();
        let fy = Element::basis_named(space, "c1>y").unwrap();
        let fe = Element::basis_named(space, "c1>e").unwrap();
        assert_eq!(structure.apply_power(&fx, 1), fy);
        assert!(structure.apply_power(&fe, 1).is_zero());
        assert!(structure.apply_power(&fy, 1).is_zero());

        let mut flat = 0;
        for lambda in field.enumerate().unwrap() {
            for mu in field.enumerate().unwrap() {
                let x = fe.scale(&lambda).add(&fx.scale(&mu));
                let verdict = conv.mc_as_twisting(&x).unwrap();
                assert_eq!(verdict, mu.is_zero());
                if verdict {
                    flat += 1;
                }
            }
        }
        assert_eq!(flat, 3);
    }

    #[test]
    fn twisting_elements_match_coalgebra_maps_to_the_bar_construction() {
        let field = f(2);
        let c = two_stage(field);
        let conv = build_convolution(&c, &DgAlgebra::dual_numbers(field), 2).unwrap();
        let space = conv.space();
        assert_eq!(space.dim(), 4);
        let candidates: Vec<u32> = space.indices_of_degree(0);
        assert_eq!(candidates.len(), 2);

        let mut flat_by_curvature = Vec::new();
        let mut flat_by_transpose = Vec::new();
        for mask in 0..4u32 {
            let x = Element::from_terms(
                space,
                candidates
                    .iter()
                    .enumerate()
                    .filter(|&(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &v)| (v, field.one())),
            );
            if is_mc(conv.structure(), &x).unwrap() {
                flat_by_curvature.push(mask);
            }
            if conv.transpose_is_chain_map(&x).unwrap() {
                flat_by_transpose.push(mask);
            }
            conv.mc_as_twisting(&x).unwrap();
        }
        assert_eq!(flat_by_curvature, flat_by_transpose);
        assert_eq!(flat_by_curvature.len(), 2);

        let tau_t = Element::basis_named(space, "c1>t").unwrap();
        assert!(conv.mc_as_twisting(&tau_t).unwrap());
        let tau_e = Element::basis_named(space, "c1>e").unwrap();
        assert!(!conv.mc_as_twisting(&tau_e).unwrap());
        assert!(conv
            .mc_as_twisting(&Element::zero(space))
            .unwrap());
    }

    #[test]
    fn strict_morphisms_of_dual_numbers_appear_in_the_deformation_complex() {
        let field = f(2);
        let def = deformation_complex(
            &DgAlgebra::dual_numbers(field),
            &DgAlgebra::dual_numbers(field),
            2,
        )
        .unwrap();
        let space = def.space();
        let candidates: Vec<u32> = space.indices_of_degree(0);
        assert_eq!(candidates.len(), 4);

        let mut flat = Vec::new();
        for mask in 0..16u32 {
            let x = Element::from_terms(
                space,
                candidates
                    .iter()
                    .enumerate()
                    .filter(|&(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &v)| (v, field.one())),
            );
            if def.mc_as_twisting(&x).unwrap() {
                flat.push(x);
            }
        }
        assert_eq!(flat.len(), 3);

        let ee = Element::basis_named(space, "e>e").unwrap();
        let tt = Element::basis_named(space, "t>t").unwrap();
        let identity = ee.add(&tt);
        assert!(flat.contains(&Element::zero(space)));
        assert!(flat.contains(&ee));
        assert!(flat.contains(&identity));

        let def_q = deformation_complex(
            &DgAlgebra::dual_numbers(q()),
            &DgAlgebra::dual_numbers(q()),
            2,
        )
        .unwrap();
        let space_q = def_q.space();
        let id_q = Element::basis_named(space_q, "e>e")
            .unwrap()
            .add(&Element::basis_named(space_q, "t>t").unwrap());
        assert!(def_q.mc_as_twisting(&id_q).unwrap());
    }

    #[test]
    fn ground_field_deformations_are_idempotent_scalars() {
        let def = deformation_complex(&DgAlgebra::unit_only(q()), &DgAlgebra::unit_only(q()), 3)
            .unwrap();
        let space = def.space();
        assert_eq!(space.dim(), 3);
        let generator = space.index_of("e>e").unwrap();
        assert_eq!(space.degree(generator), 0);
        assert_eq!(space.degree(space.index_of("e|e>e").unwrap()), 1);
        assert_eq!(space.degree(space.index_of("e|e|e>e").unwrap()), 2);

        for lambda in -2..=2i64 {
            let x = Element::from_terms(space, [(generator, q().from_i64(lambda))]);
            let expected = lambda == 0 || lambda == 1;
            assert_eq!(def.mc_as_twisting(&x).unwrap(), expected);
        }
    }

    #[test]
    fn the_interval_cylinder_restricts_to_the_ends_and_cones_the_differential() {
        let c = two_stage(q());
        let cylinder = interval_tensor(&c);
        assert!(!cylinder.is_conilpotent());
        assert_eq!(cylinder.dim(), 8);

        let idx = |name: &str| cylinder.index_of(name).unwrap();
        assert_eq!(cylinder.degree(idx("c1*a")), -1);
        assert_eq!(cylinder.degree(idx("c1*c")), -2);
        assert_eq!(cylinder.degree(idx("1*e")), 0);
        assert_eq!(cylinder.degree(idx("1*c")), -1);
        assert_eq!(cylinder.weight(idx("c2*c")), 2);
        assert_eq!(cylinder.weight(idx("1*c")), 1);

        let one = q().one();
        let minus = q().sign(-1);
        assert_eq!(
            cylinder.coproduct_terms(idx("c2*a")),
            &BTreeMap::from([((idx("c1*a"), idx("c1*a")), one.clone())])
        );
        assert_eq!(
            cylinder.coproduct_terms(idx("c1*c")),
            &BTreeMap::from([
                ((idx("c1*a"), idx("1*c")), one.clone()),
                ((idx("c1*c"), idx("1*e")), one.clone()),
                ((idx("1*c"), idx("c1*a")), minus.clone()),
                ((idx("1*c"), idx("c1*e")), minus.clone()),
            ])
        );
        assert_eq!(
            cylinder.coproduct_terms(idx("1*c")),
            &BTreeMap::from([((idx("1*c"), idx("1*e")), one.clone())])
        );

        assert_eq!(
            cylinder.diff(idx("c1*c")),
            &BTreeMap::from([(idx("c1*e"), minus)])
        );
        assert_eq!(
            cylinder.diff(idx("c2*c")),
            &BTreeMap::from([(idx("c2*e"), one.clone())])
        );
        assert_eq!(
            cylinder.diff(idx("1*c")),
            &BTreeMap::from([(idx("1*e"), one)])
        );

        let err = build_convolution(&cylinder, &DgAlgebra::unit_only(q()), 2).unwrap_err();
        assert!(matches!(err, Error::BadCoalgebraTable("conilpotent")));

        let reduced = IntervalCoalgebra::new(q()).reduced();
        let double = interval_tensor(&reduced);
        assert_eq!(double.dim(), 8);
    }
}

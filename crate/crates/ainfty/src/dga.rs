//! Finite-dimensional unital dg associative algebras with validated
//! structure tables, used as coefficient algebras for scalar extension
//! and as targets of convolution algebras.
//!
//! Construction checks everything at once: degree homogeneity of the
//! tables, unitality, associativity, the Leibniz rule, d of the unit,
//! and d squared. Elements are sparse maps from basis index to scalar.

use std::collections::BTreeMap;

use crate::cochains::{index_sets, Cochain};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

pub type DgCombo = BTreeMap<usize, Scalar>;

fn combo_add(field: &FieldSpec, into: &mut DgCombo, idx: usize, coeff: &Scalar) {
    let _ = field;
    if coeff.is_zero() {
        return;
    }
    match into.get_mut(&idx) {
        Some(c) => {
            let sum = &*c + coeff;
            if sum.is_zero() {
                into.remove(&idx);
            } else {
                *c = sum;
            }
        }
        None => {
            into.insert(idx, coeff.clone());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    field: FieldSpec,
    names: Vec<String>,
    degrees: Vec<i64>,
    unit: DgCombo,
    differential: Vec<DgCombo>,
    product: Vec<Vec<DgCombo>>,
    simplex: Option<usize>,
}

/// Collects named table rows and resolves them into a validated algebra.
pub struct DgAlgebraBuilder {
    field: FieldSpec,
    basis: Vec<(String, i64)>,
    unit: Vec<(String, Scalar)>,
    differential: Vec<(String, Scalar, String)>,
    product: Vec<(String, String, Scalar, String)>,
}

impl DgAlgebraBuilder {
    pub fn new(field: FieldSpec) -> DgAlgebraBuilder {
        DgAlgebraBuilder {
            field,
            basis: Vec::new(),
            unit: Vec::new(),
            differential: Vec::new(),
            product: Vec::new(),
        }
    }

    pub fn basis(&mut self, name: &str, degree: i64) -> &mut Self {
        self.basis.push((name.to_string(), degree));
        self
    }

    pub fn unit_term(&mut self, name: &str, coeff: Scalar) -> &mut Self {
        self.unit.push((name.to_string(), coeff));
        self
    }

    /// Adds a term `coeff * target` to `d(source)`.
    pub fn d(&mut self, source: &str, coeff: Scalar, target: &str) -> &mut Self {
        self.differential
            .push((source.to_string(), coeff, target.to_string()));
        self
    }

    /// Adds a term `coeff * target` to `left * right`.
    pub fn mul(&mut self, left: &str, right: &str, coeff: Scalar, target: &str) -> &mut Self {
        self.product
            .push((left.to_string(), right.to_string(), coeff, target.to_string()));
        self
    }

    pub fn build(&self) -> Result<DgAlgebra> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (name, degree) in &self.basis {
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(Error::BadBasisName(name.clone()));
            }
            if names.contains(name) {
                return Err(Error::DuplicateBasisName(name.clone()));
            }
            names.push(name.clone());
            degrees.push(*degree);
        }
        let index_of = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownBasis(name.to_string()))
        };
        let dim = names.len();
        let mut unit = DgCombo::new();
        for (name, coeff) in &self.unit {
            combo_add(&self.field, &mut unit, index_of(name)?, coeff);
        }
        let mut differential = vec![DgCombo::new(); dim];
        for (source, coeff, target) in &self.differential {
            let s = index_of(source)?;
            let t = index_of(target)?;
            combo_add(&self.field, &mut differential[s], t, coeff);
        }
        let mut product = vec![vec![DgCombo::new(); dim]; dim];
        for (left, right, coeff, target) in &self.product {
            let l = index_of(left)?;
            let r = index_of(right)?;
            let t = index_of(target)?;
            combo_add(&self.field, &mut product[l][r], t, coeff);
        }
        let algebra = DgAlgebra {
            field: self.field,
            names,
            degrees,
            unit,
            differential,
            product,
            simplex: None,
        };
        algebra.validate()?;
        Ok(algebra)
    }
}

impl DgAlgebra {
    fn validate(&self) -> Result<()> {
        let dim = self.names.len();
        for i in 0..dim {
            for (&t, _) in &self.differential[i] {
                if self.degrees[t] != self.degrees[i] + 1 {
                    return Err(Error::BadAlgebraTable("degree-homogeneous"));
                }
            }
            for j in 0..dim {
                for (&t, _) in &self.product[i][j] {
                    if self.degrees[t] != self.degrees[i] + self.degrees[j] {
                        return Err(Error::BadAlgebraTable("degree-homogeneous"));
                    }
                }
            }
        }
        for x in 0..dim {
            let mut single = DgCombo::new();
            single.insert(x, self.field.one());
            if self.mul(&self.unit, &single) != single || self.mul(&single, &self.unit) != single {
                return Err(Error::BadAlgebraTable("unital"));
            }
        }
        if !self.diff(&self.unit).is_empty() {
            return Err(Error::BadAlgebraTable("closed at the unit"));
        }
        for i in 0..dim {
            if !self.diff(&self.differential[i]).is_empty() {
                return Err(Error::BadAlgebraTable("a complex"));
            }
        }
        let single = |i: usize| -> DgCombo {
            let mut s = DgCombo::new();
            s.insert(i, self.field.one());
            s
        };
        for i in 0..dim {
            for j in 0..dim {
                let lhs = self.diff(&self.product[i][j]);
                let sign = self
                    .field
                    .sign(if self.degrees[i].rem_euclid(2) == 1 { -1 } else { 1 });
                let mut rhs = self.mul(&self.differential[i], &single(j));
                for (t, c) in self.mul(&single(i), &self.differential[j]) {
                    combo_add(&self.field, &mut rhs, t, &(&c * &sign));
                }
                if lhs != rhs {
                    return Err(Error::BadAlgebraTable("a Leibniz pair"));
                }
                for k in 0..dim {
                    let left = self.mul(&self.product[i][j], &single(k));
                    let right = self.mul(&single(i), &self.product[j][k]);
                    if left != right {
                        return Err(Error::BadAlgebraTable("associative"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The normalized cochain algebra of the n-simplex, with basis named
    /// by vertex tuples ("0", "01", ...).
    pub fn normalized_cochains(field: FieldSpec, n: usize) -> DgAlgebra {
        let sets = index_sets(n);
        let names: Vec<String> = sets
            .iter()
            .map(|s| s.iter().map(|i| i.to_string()).collect())
            .collect();
        let degrees: Vec<i64> = sets.iter().map(|s| s.len() as i64 - 1).collect();
        let position: BTreeMap<Vec<u8>, usize> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let cochain_to_combo = |x: &Cochain| -> DgCombo {
            x.terms().map(|(k, v)| (position[k], v.clone())).collect()
        };
        let unit = cochain_to_combo(&Cochain::unit(field, n));
        let mut differential = Vec::new();
        let mut product = Vec::new();
        for s in &sets {
            let phi = Cochain::basis(field, n, s).unwrap();
            differential.push(cochain_to_combo(&phi.differential()));
            let mut row = Vec::new();
            for t in &sets {
                let psi = Cochain::basis(field, n, t).unwrap();
                row.push(cochain_to_combo(&phi.cup(&psi).unwrap()));
            }
            product.push(row);
        }
        let algebra = DgAlgebra {
            field,
            names,
            degrees,
            unit,
            differential,
            product,
            simplex: Some(n),
        };
        algebra
            .validate()
            .expect("normalized cochain tables satisfy the dg-algebra axioms");
        algebra
    }

    /// The ground field as a one-dimensional algebra.
    pub fn unit_only(field: FieldSpec) -> DgAlgebra {
        let mut b = DgAlgebraBuilder::new(field);
        b.basis("e", 0)
            .unit_term("e", field.one())
            .mul("e", "e", field.one(), "e");
        b.build().expect("the ground field is a dg algebra")
    }

    /// The dual numbers `k[t]/t^2` with `t` in degree 0 and zero
    /// differential.
    pub fn dual_numbers(field: FieldSpec) -> DgAlgebra {
        let mut b = DgAlgebraBuilder::new(field);
        b.basis("e", 0)
            .basis("t", 0)
            .unit_term("e", field.one())
            .mul("e", "e", field.one(), "e")
            .mul("e", "t", field.one(), "t")
            .mul("t", "e", field.one(), "t");
        b.build().expect("the dual numbers are a dg algebra")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn unit(&self) -> &DgCombo {
        &self.unit
    }

    pub fn differential(&self, i: usize) -> &DgCombo {
        &self.differential[i]
    }

    pub fn product(&self, i: usize, j: usize) -> &DgCombo {
        &self.product[i][j]
    }

    /// For algebras built from simplex cochains, the simplex dimension.
    pub fn simplex_dim(&self) -> Option<usize> {
        self.simplex
    }

    /// The vertex tuple of basis vector `i` in a simplex algebra.
    pub fn vertex_tuple(&self, i: usize) -> Option<Vec<u8>> {
        self.simplex?;
        Some(
            self.names[i]
                .bytes()
                .map(|b| b - b'0')
                .collect(),
        )
    }

    pub fn diff(&self, x: &DgCombo) -> DgCombo {
        let mut out = DgCombo::new();
        for (&i, c) in x {
            for (&t, d) in &self.differential[i] {
                combo_add(&self.field, &mut out, t, &(c * d));
            }
        }
        out
    }

    pub fn mul(&self, x: &DgCombo, y: &DgCombo) -> DgCombo {
        let mut out = DgCombo::new();
        for (&i, c) in x {
            for (&j, d) in y {
                for (&t, e) in &self.product[i][j] {
                    combo_add(&self.field, &mut out, t, &(&(c * d) * e));
                }
            }
        }
        out
    }

    /// The left-nested k-fold product of basis vectors; the empty
    /// product is the unit.
    pub fn product_many(&self, factors: &[usize]) -> DgCombo {
        let mut out = self.unit.clone();
        for &f in factors {
            let mut single = DgCombo::new();
            single.insert(f, self.field.one());
            out = self.mul(&out, &single);
        }
        out
    }
}

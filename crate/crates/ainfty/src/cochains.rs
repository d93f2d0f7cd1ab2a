//! Normalized cochains on the standard simplices, as unital graded
//! associative algebras: cup product, simplicial differential, face and
//! degeneracy maps, vertex evaluations, and contraction operators.
//!
//! A basis cochain on the n-simplex is written `phi[I]` for a strictly
//! increasing tuple `I` of vertices; its degree is `|I| - 1`, and the
//! whole algebra has dimension `2^(n+1) - 1`.
//!
//! Conventions: the differential is `(d phi)(s) = sum_k (-1)^k phi(k-th
//! face of s)`, the cup product glues tuples without signs, and the
//! contraction `h^i` removes a matched vertex `i` with the sign
//! `(-1)^k` where `k` is the position of `i` in the tuple. With this
//! pair of conventions the homotopy identity
//! `d h^i + h^i d = id - eps^i` holds on the nose; the alternative
//! vertex-label sign `(-1)^i` (selectable through [`ContractionSign`])
//! breaks it already on the 2-simplex and exists here for exactly that
//! demonstration.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Which exponent the contraction operator uses for the removed vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionSign {
    /// `(-1)^k` for the position `k` of the vertex in the tuple. The
    /// homotopy identity holds with this choice.
    Position,
    /// `(-1)^i` for the vertex label `i` itself. Fails the homotopy
    /// identity, e.g. at `h^1(phi[12])` on the 2-simplex.
    VertexLabel,
}

/// An element of the normalized cochain algebra of the n-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    field: FieldSpec,
    n: usize,
    terms: BTreeMap<Vec<u8>, Scalar>,
}

fn check_indices(n: usize, indices: &[u8]) -> Result<()> {
    if indices.is_empty() || !indices.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::BadIndexSet(format!("{:?}", indices)));
    }
    let last = *indices.last().unwrap() as usize;
    if last > n {
        return Err(Error::IndexRange { index: last, n });
    }
    Ok(())
}

/// All strictly increasing nonempty vertex tuples on the n-simplex,
/// ordered by degree and then lexicographically.
pub fn index_sets(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << (n + 1)) {
        let set: Vec<u8> = (0..=n as u8).filter(|i| mask & (1 << i) != 0).collect();
        out.push(set);
    }
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

impl Cochain {
    pub fn zero(field: FieldSpec, n: usize) -> Cochain {
        Cochain {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(field: FieldSpec, n: usize, indices: &[u8]) -> Result<Cochain> {
        check_indices(n, indices)?;
        let mut terms = BTreeMap::new();
        terms.insert(indices.to_vec(), field.one());
        Ok(Cochain { field, n, terms })
    }

    /// The multiplicative unit: the sum of all vertex cochains.
    pub fn unit(field: FieldSpec, n: usize) -> Cochain {
        let mut terms = BTreeMap::new();
        for i in 0..=n as u8 {
            terms.insert(vec![i], field.one());
        }
        Cochain { field, n, terms }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn simplex_dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &Scalar)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, indices: &[u8]) -> Scalar {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub(crate) fn add_term(&mut self, indices: Vec<u8>, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&indices) {
            Some(c) => {
                let sum = &*c + coeff;
                if sum.is_zero() {
                    self.terms.remove(&indices);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(indices, coeff.clone());
            }
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.n, other.n, "cochains on different simplices");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        let mut out = Cochain::zero(self.field, self.n);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * c);
        }
        out
    }

    /// `Some(d)` when every term has tuple length `d + 1`; zero has any
    /// degree.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for k in self.terms.keys() {
            let d = k.len() as i64 - 1;
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// The simplicial coboundary.
    pub fn differential(&self) -> Cochain {
        let mut out = Cochain::zero(self.field, self.n);
        for (k, v) in &self.terms {
            for j in 0..=self.n as u8 {
                if k.contains(&j) {
                    continue;
                }
                let pos = k.iter().filter(|&&i| i < j).count();
                let mut bigger = k.clone();
                bigger.insert(pos, j);
                out.add_term(bigger, &(v * &self.field.sign(if pos % 2 == 1 { -1 } else { 1 })));
            }
        }
        out
    }

    /// The cup product: tuples glue when the last vertex of the left
    /// factor equals the first vertex of the right factor.
    pub fn cup(&self, other: &Cochain) -> Result<Cochain> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = Cochain::zero(self.field, self.n);
        for (k, v) in &self.terms {
            for (l, w) in &other.terms {
                if k.last() == l.first() {
                    let mut glued = k.clone();
                    glued.extend_from_slice(&l[1..]);
                    out.add_term(glued, &(v * w));
                }
            }
        }
        Ok(out)
    }

    /// Restriction along the j-th coface: vertices equal to `j` die and
    /// larger ones shift down.
    pub fn face(&self, j: usize) -> Result<Cochain> {
        if self.n == 0 || j > self.n {
            return Err(Error::IndexRange { index: j, n: self.n });
        }
        let mut out = Cochain::zero(self.field, self.n - 1);
        for (k, v) in &self.terms {
            if k.contains(&(j as u8)) {
                continue;
            }
            let shifted: Vec<u8> = k
                .iter()
                .map(|&i| if (i as usize) > j { i - 1 } else { i })
                .collect();
            out.add_term(shifted, v);
        }
        Ok(out)
    }

    /// Precomposition with the j-th codegeneracy: sums over the strictly
    /// increasing preimage tuples one dimension up.
    pub fn degeneracy(&self, j: usize) -> Result<Cochain> {
        if j > self.n {
            return Err(Error::IndexRange { index: j, n: self.n });
        }
        let mut out = Cochain::zero(self.field, self.n + 1);
        for (k, v) in &self.terms {
            // Each vertex < j lifts to itself, each vertex > j shifts up,
            // and the vertex j (if present) lifts to either j or j + 1.
            let choices = if k.contains(&(j as u8)) { 2 } else { 1 };
            for choice in 0..choices {
                let lifted: Vec<u8> = k
                    .iter()
                    .map(|&i| {
                        if (i as usize) < j {
                            i
                        } else if (i as usize) > j {
                            i + 1
                        } else {
                            i + choice
                        }
                    })
                    .collect();
                out.add_term(lifted, v);
            }
        }
        Ok(out)
    }

    /// The value of the degree-0 part at vertex `i`.
    pub fn vertex_eval(&self, i: usize) -> Result<Scalar> {
        if i > self.n {
            return Err(Error::IndexRange { index: i, n: self.n });
        }
        Ok(self.coeff(&[i as u8]))
    }

    /// Vertex evaluation followed by the unit inclusion.
    pub fn epsilon(&self, i: usize) -> Result<Cochain> {
        let c = self.vertex_eval(i)?;
        Ok(Cochain::unit(self.field, self.n).scale(&c))
    }

    /// The contraction toward vertex `i`, with the position sign.
    pub fn contraction(&self, i: usize) -> Result<Cochain> {
        self.contraction_with(i, ContractionSign::Position)
    }

    pub fn contraction_with(&self, i: usize, sign: ContractionSign) -> Result<Cochain> {
        if i > self.n {
            return Err(Error::IndexRange { index: i, n: self.n });
        }
        let mut out = Cochain::zero(self.field, self.n);
        for (k, v) in &self.terms {
            if k.len() < 2 {
                continue;
            }
            if let Some(pos) = k.iter().position(|&l| l as usize == i) {
                let exponent = match sign {
                    ContractionSign::Position => pos,
                    ContractionSign::VertexLabel => i,
                };
                let mut smaller = k.clone();
                smaller.remove(pos);
                out.add_term(
                    smaller,
                    &(v * &self.field.sign(if exponent % 2 == 1 { -1 } else { 1 })),
                );
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(k, _)| (k.len(), (*k).clone()));
        for (pos, (k, v)) in ordered.iter().enumerate() {
            let name: String = k.iter().map(|i| i.to_string()).collect();
            let coeff = crate::field::scalar_to_string(v);
            if pos == 0 {
                if coeff == "1" {
                    write!(f, "phi[{}]", name)?;
                } else if coeff == "-1" {
                    write!(f, "-phi[{}]", name)?;
                } else {
                    write!(f, "{} phi[{}]", coeff, name)?;
                }
            } else if let Some(pos_coeff) = coeff.strip_prefix('-') {
                if pos_coeff == "1" {
                    write!(f, " - phi[{}]", name)?;
                } else {
                    write!(f, " - {} phi[{}]", pos_coeff, name)?;
                }
            } else if coeff == "1" {
                write!(f, " + phi[{}]", name)?;
            } else {
                write!(f, " + {} phi[{}]", coeff, name)?;
            }
        }
        Ok(())
    }
}

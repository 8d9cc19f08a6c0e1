//! Dense matrices and index arrays of rational functions.

use std::fmt;

use symcore::RationalFunction;

pub type Matrix = Vec<Vec<RationalFunction>>;

pub fn zero_matrix(n: usize, nvars: usize) -> Matrix {
    vec![vec![RationalFunction::zero(nvars); n]; n]
}

pub fn identity(n: usize, nvars: usize) -> Matrix {
    let mut m = zero_matrix(n, nvars);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = RationalFunction::one(nvars);
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let nvars = a[0][0].nvars();
    (0..n)
        .map(|i| {
            (0..b[0].len())
                .map(|j| symcore::ratfunc::sum(nvars, (0..b.len()).map(|s| a[i][s].mul(&b[s][j]))))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn minor(a: &Matrix, row: usize, col: usize) -> Matrix {
    a.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(c, _)| *c != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Adjugate over determinant. Row reduction over rational functions
/// normalizes every intermediate entry and blows up on dense symbolic
/// matrices; here each entry costs one normalized division.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let det = determinant(a);
    if det.is_zero() {
        return None;
    }
    if n == 1 {
        return Some(vec![vec![det.inv().ok()?]]);
    }
    let inv_det = det.inv().ok()?;
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = determinant(&minor(a, j, i)).mul(&inv_det);
                        if (i + j) % 2 == 0 {
                            c
                        } else {
                            c.neg()
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Determinant by cofactor expansion along the first row; matrices here are
/// at most a handful of rows.
pub fn determinant(a: &Matrix) -> RationalFunction {
    let n = a.len();
    let nvars = a[0][0].nvars();
    match n {
        1 => a[0][0].clone(),
        2 => a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])),
        _ => {
            let mut acc = RationalFunction::zero(nvars);
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let term = a[0][j].mul(&determinant(&minor(a, 0, j)));
                acc = if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}

/// A component array with `upper` contravariant indices followed by `lower`
/// covariant ones, stored row-major in that index order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    label: String,
    upper: usize,
    lower: usize,
    n: usize,
    data: Vec<RationalFunction>,
}

impl Tensor {
    pub fn from_fn<F>(label: &str, upper: usize, lower: usize, n: usize, mut f: F) -> Self
    where
        F: FnMut(&[usize]) -> RationalFunction,
    {
        let rank = upper + lower;
        let len = n.pow(rank as u32);
        let mut idx = vec![0usize; rank];
        let mut data = Vec::with_capacity(len);
        for flat in 0..len {
            let mut rest = flat;
            for slot in (0..rank).rev() {
                idx[slot] = rest % n;
                rest /= n;
            }
            data.push(f(&idx));
        }
        Tensor {
            label: label.to_string(),
            upper,
            lower,
            n,
            data,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.upper + self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, idx: &[usize]) -> &RationalFunction {
        &self.data[self.offset(idx)]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RationalFunction::is_zero)
    }

    /// Component-wise difference, keeping this tensor's label.
    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!(
            (self.upper, self.lower, self.n),
            (other.upper, other.lower, other.n)
        );
        Tensor {
            label: self.label.clone(),
            upper: self.upper,
            lower: self.lower,
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn relabel(mut self, label: &str) -> Tensor {
        self.label = label.to_string();
        self
    }

    /// All index tuples with their components, in row-major order.
    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &RationalFunction)> + '_ {
        let rank = self.rank();
        let n = self.n;
        self.data.iter().enumerate().map(move |(flat, v)| {
            let mut idx = vec![0usize; rank];
            let mut rest = flat;
            for slot in (0..rank).rev() {
                idx[slot] = rest % n;
                rest /= n;
            }
            (idx, v)
        })
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &RationalFunction)> + '_ {
        self.components().filter(|(_, v)| !v.is_zero())
    }

    /// `label[i][j]_k_l` with one-based indices.
    pub fn index_name(&self, idx: &[usize]) -> String {
        let mut s = self.label.clone();
        for i in &idx[..self.upper] {
            s.push_str(&format!("[{}]", i + 1));
        }
        for i in &idx[self.upper..] {
            s.push_str(&format!("_{}", i + 1));
        }
        s
    }

    /// Nonzero components, one `name = value` line each, or `label = 0`.
    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> TensorDisplay<'a> {
        TensorDisplay { t: self, names }
    }
}

pub struct TensorDisplay<'a> {
    t: &'a Tensor,
    names: &'a [&'a str],
}

impl fmt::Display for TensorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (idx, v) in self.t.nonzero() {
            writeln!(
                f,
                "{} = {}",
                self.t.index_name(&idx),
                v.display_with(self.names)
            )?;
            any = true;
        }
        if !any {
            writeln!(f, "{} = 0", self.t.label)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcore::int;

    fn rf(n: i64) -> RationalFunction {
        RationalFunction::integer(2, n)
    }

    #[test]
    fn inverse_and_determinant_of_integer_matrix() {
        let m = vec![vec![rf(2), rf(1)], vec![rf(5), rf(3)]];
        assert_eq!(determinant(&m), rf(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rf(3), rf(-1)], vec![rf(-5), rf(2)]]);
        assert_eq!(mat_mul(&m, &inv), identity(2, 2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let u = RationalFunction::var(2, 1);
        let m = vec![vec![u.clone(), u.scale(&int(2))], vec![rf(1), rf(2)]];
        assert!(determinant(&m).is_zero());
        assert!(inverse(&m).is_none());
    }

    #[test]
    fn three_by_three_determinant() {
        let m = vec![
            vec![rf(0), rf(0), rf(1)],
            vec![rf(0), rf(1), rf(0)],
            vec![rf(1), rf(0), rf(0)],
        ];
        assert_eq!(determinant(&m), rf(-1));
        assert_eq!(inverse(&m).unwrap(), m);
    }

    #[test]
    fn tensor_indexing_and_display() {
        let t = Tensor::from_fn("Gamma", 2, 1, 2, |idx| {
            if idx == [0, 1, 1] {
                rf(-1)
            } else {
                rf(0)
            }
        });
        assert_eq!(t.get(&[0, 1, 1]), &rf(-1));
        let names = ["x", "u"];
        assert_eq!(t.display(&names).to_string(), "Gamma[1][2]_2 = -1\n");
        let z = Tensor::from_fn("R", 2, 2, 2, |_| rf(0));
        assert!(z.is_zero());
        assert_eq!(z.display(&names).to_string(), "R = 0\n");
    }
}

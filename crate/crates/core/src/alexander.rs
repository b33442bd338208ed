//! Fox free differential calculus and the Alexander polynomial of a
//! presentation with respect to a weighting.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, ModPoly, Span};
use crate::words::{FreeWord, Presentation, Weighting};

pub const DEFAULT_PRIMES: [u64; 4] = [2, 3, 5, 7];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error("presentation has deficiency {0}; at least one is required")]
    NotDeficiencyOne(i64),
    #[error("no generator has weight +1 or -1; eliminate one by a Tietze move first")]
    NoUnitWeightGenerator,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// `phi(dw/dg)`, where `phi` sends each generator `x` to `t^chi(x)`.
pub fn fox_derivative_abelianized(w: &FreeWord, g: &str, chi: &Weighting) -> LaurentPoly {
    let mut terms: Vec<(i64, BigInt)> = Vec::new();
    let mut height = 0i64;
    for (letter, sign) in w.letters() {
        let step = chi.get(letter);
        if letter == g {
            if sign > 0 {
                terms.push((height, BigInt::from(1)));
            } else {
                // d(g^-1)/dg = -g^-1
                terms.push((height - step, BigInt::from(-1)));
            }
        }
        height += sign * step;
    }
    LaurentPoly::from_terms(terms)
}

/// Rows are relators, columns are generators in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlexanderMatrix {
    pub generators: Vec<String>,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl AlexanderMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.generators.len()
    }
}

pub fn alexander_matrix(p: &Presentation, chi: &Weighting) -> AlexanderMatrix {
    AlexanderMatrix {
        generators: p.generators().to_vec(),
        entries: p
            .relators()
            .iter()
            .map(|r| p.generators().iter().map(|g| fox_derivative_abelianized(r, g, chi)).collect())
            .collect(),
    }
}

/// Fraction-free Gaussian elimination over `Z[t, 1/t]`.
pub fn determinant(matrix: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = matrix.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut m: Vec<Vec<LaurentPoly>> = matrix.to_vec();
    let mut sign_flip = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return LaurentPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModPRecord {
    pub reduction: ModPoly,
    pub d: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlexanderResult {
    pub delta: LaurentPoly,
    pub deleted_column: String,
    pub mod_p_table: BTreeMap<u64, ModPRecord>,
}

/// Deletes the column of the first generator of weight `±1` and takes the
/// determinant of what remains. With more generators than relators plus
/// one, no maximal minor exists and the result is 0.
pub fn alexander_polynomial(p: &Presentation, chi: &Weighting) -> Result<AlexanderResult, AlexanderError> {
    alexander_polynomial_with_primes(p, chi, &DEFAULT_PRIMES)
}

pub fn alexander_polynomial_with_primes(
    p: &Presentation,
    chi: &Weighting,
    primes: &[u64],
) -> Result<AlexanderResult, AlexanderError> {
    let deficiency = p.deficiency();
    if deficiency < 1 {
        return Err(AlexanderError::NotDeficiencyOne(deficiency));
    }
    let deleted = p
        .generators()
        .iter()
        .position(|g| chi.get(g).abs() == 1)
        .ok_or(AlexanderError::NoUnitWeightGenerator)?;
    alexander_polynomial_deleting(p, chi, &p.generators()[deleted], primes)
}

/// As [`alexander_polynomial_with_primes`] but deleting the named column,
/// which must carry weight `±1`.
pub fn alexander_polynomial_deleting(
    p: &Presentation,
    chi: &Weighting,
    column: &str,
    primes: &[u64],
) -> Result<AlexanderResult, AlexanderError> {
    let deficiency = p.deficiency();
    if deficiency < 1 {
        return Err(AlexanderError::NotDeficiencyOne(deficiency));
    }
    if chi.get(column).abs() != 1 {
        return Err(AlexanderError::NoUnitWeightGenerator);
    }
    let matrix = alexander_matrix(p, chi);
    let keep: Vec<usize> = (0..matrix.cols()).filter(|&j| matrix.generators[j] != column).collect();
    let delta = if deficiency > 1 {
        LaurentPoly::zero()
    } else {
        let square: Vec<Vec<LaurentPoly>> = matrix
            .entries
            .iter()
            .map(|row| keep.iter().map(|&j| row[j].clone()).collect())
            .collect();
        determinant(&square).normalize()
    };
    let mut mod_p_table = BTreeMap::new();
    for &q in primes {
        let reduction = delta.reduce_mod(q)?;
        let d = reduction.degree_span();
        mod_p_table.insert(q, ModPRecord { reduction, d });
    }
    Ok(AlexanderResult { delta, deleted_column: column.to_string(), mod_p_table })
}

/// `sum_j phi(dr/dx_j) (t^chi(x_j) - 1)`, which vanishes for every relator.
pub fn fox_identity_residual(r: &FreeWord, p: &Presentation, chi: &Weighting) -> LaurentPoly {
    p.generators().iter().fold(LaurentPoly::zero(), |acc, g| {
        let factor = &LaurentPoly::monomial(1, chi.get(g)) - &LaurentPoly::one();
        &acc + &(&fox_derivative_abelianized(r, g, chi) * &factor)
    })
}

impl AlexanderResult {
    pub fn is_unit(&self) -> bool {
        self.delta.is_unit()
    }

    pub fn d(&self, p: u64) -> Option<Span> {
        self.mod_p_table.get(&p).map(|r| r.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{canonical_weighting, parse_presentation};

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn setup(text: &str) -> (Presentation, Weighting) {
        let p = parse_presentation(text).unwrap();
        let chi = canonical_weighting(&p).unwrap();
        (p, chi)
    }

    #[test]
    fn fox_derivatives_of_bs12() {
        let (p, chi) = setup("<a,t | t a t^-1 = a^2>");
        let r = &p.relators()[0];
        assert_eq!(fox_derivative_abelianized(r, "a", &chi), lp("t - 2"));
        assert!(fox_derivative_abelianized(r, "t", &chi).is_zero());
        assert_eq!(fox_derivative_abelianized(&FreeWord::generator("x"), "x", &chi), LaurentPoly::one());
    }

    #[test]
    fn matrices() {
        let (p, chi) = setup("<a,t | t a t^-1 = a^2>");
        let m = alexander_matrix(&p, &chi);
        assert_eq!(m.entries, vec![vec![lp("t - 2"), LaurentPoly::zero()]]);

        let (p, chi) = setup("<x,y | x y^2 x^-1 = y^3>");
        let m = alexander_matrix(&p, &chi);
        assert_eq!(m.entries, vec![vec![LaurentPoly::zero(), lp("2t - 3")]]);

        let p = parse_presentation("<t,a | >").unwrap();
        let chi = Weighting::new(&p, [("t".to_string(), 1)].into_iter().collect()).unwrap();
        let m = alexander_matrix(&p, &chi);
        assert_eq!((m.rows(), m.cols()), (0, 2));
    }

    #[test]
    fn polynomials() {
        let (p, chi) = setup("<a,t | t a t^-1 = a^2>");
        let res = alexander_polynomial(&p, &chi).unwrap();
        assert_eq!(res.delta, lp("t - 2"));
        assert_eq!(res.deleted_column, "t");
        assert_eq!(res.d(2), Some(Span::Finite(0)));
        assert_eq!(res.d(3), Some(Span::Finite(1)));

        let (p, chi) = setup("<u,v | u v u v^-1 u^-1 v^-1>");
        assert_eq!(alexander_polynomial(&p, &chi).unwrap().delta, lp("t^2 - t + 1"));

        let (p, chi) = setup("<a,t | t a^-2 t^-1 a^-1 t a^-1 t^-1 a t a t^-1 a^-1 t a t^-1 a>");
        assert_eq!(alexander_polynomial(&p, &chi).unwrap().delta, LaurentPoly::one());

        let p = parse_presentation("<t,a | >").unwrap();
        let chi = Weighting::new(&p, [("t".to_string(), 1)].into_iter().collect()).unwrap();
        let res = alexander_polynomial(&p, &chi).unwrap();
        assert!(res.delta.is_zero());
        assert_eq!(res.d(2), Some(Span::Infinite));
    }

    #[test]
    fn deleted_column_does_not_matter() {
        let (p, chi) = setup("<u,v | u v u v^-1 u^-1 v^-1>");
        let a = alexander_polynomial_deleting(&p, &chi, "u", &DEFAULT_PRIMES).unwrap();
        let b = alexander_polynomial_deleting(&p, &chi, "v", &DEFAULT_PRIMES).unwrap();
        assert_eq!(a.delta, b.delta);
    }

    #[test]
    fn precondition_errors() {
        let p = parse_presentation("<x | x, x^2>").unwrap();
        let chi = Weighting::new(&parse_presentation("<x | >").unwrap(), [("x".to_string(), 1)].into_iter().collect()).unwrap();
        assert_eq!(alexander_polynomial(&p, &chi), Err(AlexanderError::NotDeficiencyOne(-1)));

        let p = parse_presentation("<x, y | x^2 y^-1>").unwrap();
        let chi = canonical_weighting(&p).unwrap();
        assert_eq!((chi.get("x"), chi.get("y")), (1, 2));
        let q = parse_presentation("<x, y | x^2 y^-3>").unwrap();
        let chi = canonical_weighting(&q).unwrap();
        assert_eq!(alexander_polynomial(&q, &chi), Err(AlexanderError::NoUnitWeightGenerator));
    }

    #[test]
    fn bareiss_determinants() {
        let m = vec![
            vec![lp("t"), lp("1"), lp("0")],
            vec![lp("1"), lp("t"), lp("1")],
            vec![lp("0"), lp("1"), lp("t")],
        ];
        assert_eq!(determinant(&m), lp("t^3 - 2t"));
        let m = vec![vec![lp("0"), lp("1")], vec![lp("1"), lp("0")]];
        assert_eq!(determinant(&m), lp("-1"));
        let m = vec![vec![lp("t - 1"), lp("t^-1")], vec![lp("2"), lp("2t^-1")]];
        assert_eq!(determinant(&m), lp("2 - 4t^-1"));
    }
}

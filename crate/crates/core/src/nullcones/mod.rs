//! The three nullcone families, their invariant-ring presentations, the
//! variety-of-complexes ideals, and the closed-form numerics.

mod formulas;
mod matrix;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use formulas::{binom, generic_component_height, Formulas};
pub use matrix::{subsets, PolyMatrix};

use crate::error::{Error, Result};
use crate::polycore::{Field, Ideal, MonomialOrder, Polynomial, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pfaffian,
    Generic,
    Symmetric,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Pfaffian => "pfaffian",
            Family::Generic => "generic",
            Family::Symmetric => "symmetric",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pfaffian" | "alt" | "alternating" => Ok(Family::Pfaffian),
            "generic" | "gen" | "determinantal" => Ok(Family::Generic),
            "symmetric" | "sym" => Ok(Family::Symmetric),
            _ => Err(Error::Parse(format!("unknown family `{s}`"))),
        }
    }
}

/// Family plus shape. `m` is meaningful only for the generic family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub t: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl FamilyParams {
    pub fn pfaffian(t: usize, n: usize) -> Self {
        FamilyParams {
            family: Family::Pfaffian,
            t,
            n,
            m: None,
        }
    }

    pub fn generic(m: usize, t: usize, n: usize) -> Self {
        FamilyParams {
            family: Family::Generic,
            t,
            n,
            m: Some(m),
        }
    }

    pub fn symmetric(t: usize, n: usize) -> Self {
        FamilyParams {
            family: Family::Symmetric,
            t,
            n,
            m: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.n == 0 {
            return Err(Error::InvalidParams("t and n must be positive".into()));
        }
        match (self.family, self.m) {
            (Family::Generic, None) => Err(Error::InvalidParams("generic family needs m".into())),
            (Family::Generic, Some(0)) => Err(Error::InvalidParams("m must be positive".into())),
            (Family::Generic, Some(_)) => Ok(()),
            (_, Some(_)) => Err(Error::InvalidParams(format!(
                "m is not a parameter of the {} family",
                self.family
            ))),
            _ => Ok(()),
        }
    }

    pub fn m(&self) -> usize {
        self.m.unwrap_or(0)
    }

    /// Number of variables of the polynomial ring S.
    pub fn num_variables(&self) -> usize {
        match self.family {
            Family::Pfaffian => 2 * self.t * self.n,
            Family::Generic => (self.m() + self.n) * self.t,
            Family::Symmetric => self.t * self.n,
        }
    }

    pub fn formulas(&self) -> Formulas {
        Formulas::of(self)
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            Some(m) => write!(f, "{}(m={}, t={}, n={})", self.family, m, self.t, self.n),
            None => write!(f, "{}(t={}, n={})", self.family, self.t, self.n),
        }
    }
}

fn var_names(prefix: &str, rows: usize, cols: usize) -> impl Iterator<Item = String> + '_ {
    (1..=rows).flat_map(move |i| (1..=cols).map(move |j| format!("{prefix}_{i}_{j}")))
}

/// The standard alternating form: block diagonal with blocks `[[0,1],[-1,0]]`.
pub fn omega<F: Field>(ring: &Arc<Ring<F>>, t: usize) -> PolyMatrix<F> {
    let one = ring.field().one();
    PolyMatrix::from_fn(2 * t, 2 * t, |i, j| {
        if i % 2 == 0 && j == i + 1 {
            Polynomial::constant(ring, one.clone())
        } else if i % 2 == 1 && j + 1 == i {
            Polynomial::constant(ring, ring.field().neg(&one))
        } else {
            Polynomial::zero(ring)
        }
    })
}

/// Positions of the distinct entries of the invariant matrix, row-major.
pub fn invariant_positions(params: &FamilyParams) -> Vec<(usize, usize)> {
    let n = params.n;
    match params.family {
        Family::Pfaffian => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        Family::Symmetric => (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect(),
        Family::Generic => (0..params.m())
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .collect(),
    }
}

/// The nullcone of one family. Holds the ambient ring S with its matrices Y
/// (and Z), plus the ideal generated by the entries of the invariant matrix
/// YᵗΩY, YZ or YᵗY.
#[derive(Debug, Clone)]
pub struct Nullcone<F: Field> {
    pub params: FamilyParams,
    pub ring: Arc<Ring<F>>,
    pub y: PolyMatrix<F>,
    pub z: Option<PolyMatrix<F>>,
    pub invariant: PolyMatrix<F>,
    pub ideal: Ideal<F>,
}

impl<F: Field> Nullcone<F> {
    pub fn build(field: F, params: FamilyParams) -> Result<Self> {
        Self::build_with_order(field, params, MonomialOrder::Grevlex)
    }

    pub fn build_with_order(field: F, params: FamilyParams, order: MonomialOrder) -> Result<Self> {
        params.validate()?;
        let (t, n) = (params.t, params.n);
        let (ring, y, z, invariant) = match params.family {
            Family::Pfaffian => {
                let ring = Ring::new(field, var_names("y", 2 * t, n).collect(), order)?;
                let y = PolyMatrix::indeterminates(&ring, "y", 2 * t, n)?;
                let inv = y.transpose().mul(&omega(&ring, t))?.mul(&y)?;
                (ring, y, None, inv)
            }
            Family::Generic => {
                let m = params.m();
                let names = var_names("y", m, t).chain(var_names("z", t, n)).collect();
                let ring = Ring::new(field, names, order)?;
                let y = PolyMatrix::indeterminates(&ring, "y", m, t)?;
                let z = PolyMatrix::indeterminates(&ring, "z", t, n)?;
                let inv = y.mul(&z)?;
                (ring, y, Some(z), inv)
            }
            Family::Symmetric => {
                let ring = Ring::new(field, var_names("y", t, n).collect(), order)?;
                let y = PolyMatrix::indeterminates(&ring, "y", t, n)?;
                let inv = y.transpose().mul(&y)?;
                (ring, y, None, inv)
            }
        };
        let gens = invariant_positions(&params)
            .into_iter()
            .map(|(i, j)| invariant.get(i, j).clone())
            .collect();
        let ideal = Ideal::new(&ring, gens)?;
        Ok(Nullcone {
            params,
            ring,
            y,
            z,
            invariant,
            ideal,
        })
    }

    /// The distinct entries of the invariant matrix, in canonical order.
    pub fn invariant_generators(&self) -> &[Polynomial<F>] {
        self.ideal.generators()
    }

    /// 𝔭ᵢⱼ = I_{i+1}(Y) + I_{j+1}(Z) + I₁(YZ); generic family only.
    pub fn variety_of_complexes(&self, i: usize, j: usize) -> Result<Ideal<F>> {
        let z = match (&self.z, self.params.family) {
            (Some(z), Family::Generic) => z,
            _ => {
                return Err(Error::InvalidParams(
                    "varieties of complexes need the generic family".into(),
                ))
            }
        };
        let (m, t, n) = (self.params.m(), self.params.t, self.params.n);
        if i + j > t || i > m || j > n {
            return Err(Error::InvalidParams(format!(
                "need i + j <= t, i <= m, j <= n; got i={i}, j={j}"
            )));
        }
        let mut gens = self.y.minors(i + 1);
        gens.extend(z.minors(j + 1));
        gens.extend(self.ideal.generators().iter().cloned());
        Ideal::new(&self.ring, gens).map(|id| id.with_config(*self.ideal.config()))
    }

    /// I₁(Y), the ideal of all entries of Y.
    pub fn entries_of_y(&self) -> Result<Ideal<F>> {
        Ideal::new(&self.ring, self.y.entries().to_vec())
    }

    /// I₁(Z); generic family only.
    pub fn entries_of_z(&self) -> Result<Ideal<F>> {
        let z = self
            .z
            .as_ref()
            .ok_or_else(|| Error::InvalidParams("no Z matrix in this family".into()))?;
        Ideal::new(&self.ring, z.entries().to_vec())
    }
}

/// Presentation 𝕂[X]/J of the invariant ring, where X has one variable per
/// distinct invariant entry and J is Pf_{2t+2}(X), I_{t+1}(X) generic, or
/// I_{t+1}(X) symmetric.
#[derive(Debug, Clone)]
pub struct Presentation<F: Field> {
    pub params: FamilyParams,
    pub ring: Arc<Ring<F>>,
    pub x: PolyMatrix<F>,
    pub positions: Vec<(usize, usize)>,
    pub defining: Ideal<F>,
}

impl<F: Field> Presentation<F> {
    pub fn build(field: F, params: FamilyParams) -> Result<Self> {
        params.validate()?;
        let positions = invariant_positions(&params);
        let names: Vec<String> = positions
            .iter()
            .map(|(i, j)| format!("x_{}_{}", i + 1, j + 1))
            .collect();
        let ring = Ring::new(field, names, MonomialOrder::Grevlex)?;
        let var = |i: usize, j: usize| {
            Polynomial::var_named(&ring, &format!("x_{}_{}", i + 1, j + 1)).unwrap()
        };
        let (rows, cols) = match params.family {
            Family::Generic => (params.m(), params.n),
            _ => (params.n, params.n),
        };
        let x = PolyMatrix::from_fn(rows, cols, |i, j| match params.family {
            Family::Generic => var(i, j),
            Family::Symmetric => var(i.min(j), i.max(j)),
            Family::Pfaffian => match i.cmp(&j) {
                std::cmp::Ordering::Less => var(i, j),
                std::cmp::Ordering::Equal => Polynomial::zero(&ring),
                std::cmp::Ordering::Greater => var(j, i).neg(),
            },
        });
        let t = params.t;
        let defining = match params.family {
            Family::Pfaffian => x.pfaffians(2 * t + 2)?,
            _ => x.minors(t + 1),
        };
        let defining = Ideal::new(&ring, defining)?;
        Ok(Presentation {
            params,
            ring,
            x,
            positions,
            defining,
        })
    }

    /// Images of polynomials in 𝕂[X] under X ↦ invariant matrix.
    pub fn map_to_nullcone(&self, nc: &Nullcone<F>, f: &Polynomial<F>) -> Polynomial<F> {
        let images: Vec<Polynomial<F>> = self
            .positions
            .iter()
            .map(|&(i, j)| nc.invariant.get(i, j).clone())
            .collect();
        f.substitute(&nc.ring, &images)
    }
}

pub fn pfaffian_nullcone<F: Field>(field: F, t: usize, n: usize) -> Result<Ideal<F>> {
    Ok(Nullcone::build(field, FamilyParams::pfaffian(t, n))?.ideal)
}

pub fn generic_nullcone<F: Field>(field: F, m: usize, t: usize, n: usize) -> Result<Ideal<F>> {
    Ok(Nullcone::build(field, FamilyParams::generic(m, t, n))?.ideal)
}

pub fn symmetric_nullcone<F: Field>(field: F, t: usize, n: usize) -> Result<Ideal<F>> {
    Ok(Nullcone::build(field, FamilyParams::symmetric(t, n))?.ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{PrimeField, Rationals};

    fn texts<F: Field>(i: &Ideal<F>) -> Vec<String> {
        i.generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn pfaffian_generators() {
        let i = pfaffian_nullcone(Rationals, 1, 2).unwrap();
        assert_eq!(texts(&i), vec!["-y_1_2*y_2_1 + y_1_1*y_2_2"]);
        let i = pfaffian_nullcone(Rationals, 1, 3).unwrap();
        assert_eq!(i.generators().len(), 3);
        let nc = Nullcone::build(Rationals, FamilyParams::pfaffian(1, 3)).unwrap();
        let minors = nc.y.minors(2);
        for g in i.generators() {
            assert!(minors.contains(g));
        }
        assert!(pfaffian_nullcone(Rationals, 2, 1)
            .unwrap()
            .generators()
            .is_empty());
        assert_eq!(
            pfaffian_nullcone(Rationals, 2, 4)
                .unwrap()
                .generators()
                .len(),
            6
        );
    }

    #[test]
    fn generic_and_symmetric_generators() {
        assert_eq!(
            texts(&generic_nullcone(Rationals, 1, 1, 1).unwrap()),
            vec!["y_1_1*z_1_1"]
        );
        assert_eq!(
            generic_nullcone(Rationals, 2, 1, 2)
                .unwrap()
                .generators()
                .len(),
            4
        );
        assert_eq!(
            texts(&symmetric_nullcone(Rationals, 1, 2).unwrap()),
            vec!["y_1_1^2", "y_1_1*y_1_2", "y_1_2^2"]
        );
        assert_eq!(
            symmetric_nullcone(Rationals, 2, 3)
                .unwrap()
                .generators()
                .len(),
            6
        );
    }

    #[test]
    fn omega_squares_to_minus_identity() {
        let ring = Ring::new(Rationals, vec!["a".into()], MonomialOrder::Grevlex).unwrap();
        let o = omega(&ring, 2);
        assert!(o.is_alternating());
        let sq = o.mul(&o).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { "-1" } else { "0" };
                assert_eq!(sq.get(i, j).to_string(), want);
            }
        }
        assert_eq!(o.determinant().unwrap().to_string(), "1");
    }

    #[test]
    fn principal_pfaffian_normal_form() {
        let nc = Nullcone::build(Rationals, FamilyParams::pfaffian(1, 2)).unwrap();
        let det = nc.y.determinant().unwrap();
        assert!(nc.ideal.normal_form(&det).unwrap().is_zero());
        let sat = nc
            .ideal
            .saturate(&Polynomial::var_named(&nc.ring, "y_1_1").unwrap())
            .unwrap();
        assert!(sat.equals(&nc.ideal).unwrap());
    }

    #[test]
    fn small_dimensions() {
        let i = pfaffian_nullcone(Rationals, 1, 3).unwrap();
        assert_eq!(i.krull_dimension().unwrap(), 4);
        let nc = Nullcone::build(
            PrimeField::new(32003).unwrap(),
            FamilyParams::generic(2, 2, 2),
        )
        .unwrap();
        assert_eq!(nc.variety_of_complexes(1, 1).unwrap().height().unwrap(), 3);
        assert!(nc.variety_of_complexes(2, 1).is_err());
    }

    #[test]
    fn variety_of_complexes_extremes() {
        let nc = Nullcone::build(Rationals, FamilyParams::generic(2, 2, 2)).unwrap();
        let p02 = nc.variety_of_complexes(0, 2).unwrap();
        assert!(
            p02.radical_equal(&nc.entries_of_y().unwrap())
                .unwrap()
                .equal
        );
        let p20 = nc.variety_of_complexes(2, 0).unwrap();
        assert!(
            p20.radical_equal(&nc.entries_of_z().unwrap())
                .unwrap()
                .equal
        );
    }

    #[test]
    fn presentations() {
        let p = Presentation::build(Rationals, FamilyParams::pfaffian(1, 4)).unwrap();
        assert_eq!(p.ring.nvars(), 6);
        assert_eq!(
            texts(&p.defining),
            vec!["x_1_4*x_2_3 - x_1_3*x_2_4 + x_1_2*x_3_4"]
        );
        let p = Presentation::build(Rationals, FamilyParams::symmetric(1, 2)).unwrap();
        assert_eq!(texts(&p.defining), vec!["-x_1_2^2 + x_1_1*x_2_2"]);
        let p = Presentation::build(Rationals, FamilyParams::generic(2, 2, 2)).unwrap();
        assert!(p.defining.generators().is_empty());
    }

    #[test]
    fn presentation_maps_onto_invariants() {
        let params = FamilyParams::pfaffian(1, 4);
        let p = Presentation::build(Rationals, params).unwrap();
        let nc = Nullcone::build(Rationals, params).unwrap();
        for g in p.defining.generators() {
            assert!(p.map_to_nullcone(&nc, g).is_zero());
        }
    }

    #[test]
    fn params_validation() {
        assert!(FamilyParams::generic(0, 1, 1).validate().is_err());
        assert!(FamilyParams::pfaffian(0, 1).validate().is_err());
        assert!(FamilyParams {
            family: Family::Generic,
            t: 1,
            n: 1,
            m: None
        }
        .validate()
        .is_err());
        assert_eq!("sym".parse::<Family>().unwrap(), Family::Symmetric);
    }
}

#[cfg(test)]
mod height_grid {
    use super::*;
    use crate::polycore::PrimeField;

    #[test]
    fn groebner_heights_match_formulas_up_to_twelve_variables() {
        let f = PrimeField::new(32003).unwrap();
        let mut grid = Vec::new();
        for t in 1..=12 {
            for n in 1..=12 {
                grid.push(FamilyParams::pfaffian(t, n));
                grid.push(FamilyParams::symmetric(t, n));
                for m in 1..=12 {
                    grid.push(FamilyParams::generic(m, t, n));
                }
            }
        }
        grid.retain(|p| p.num_variables() <= 12);
        for p in grid {
            let nc = Nullcone::build(f, p).unwrap();
            let h = nc.ideal.height().unwrap();
            assert_eq!(h, p.formulas().height, "{p}");
        }
    }
}

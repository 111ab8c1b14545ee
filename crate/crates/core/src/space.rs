//! The assembled pipeline: realization, Cartan decomposition, maximal
//! abelian subspace and positive root system for one symmetric space.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_core::{AlgebraElement, CartanDecomposition, Family, LieAlgebraRealization};
use crate::linalg::sym_eigen;
use crate::root_space::{choose_positive, maximal_abelian, restricted_roots, RootSystem};

/// Parsed `--space` argument: `sl:n`, `so:p,q`, `su:p,q`, `sp:n` or
/// `hyperbolic:n` (shorthand for `so:n,1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceSpec {
    pub raw: String,
    pub family: Family,
    pub params: Vec<usize>,
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw = s.trim().to_string();
        let (name, rest) = raw
            .split_once(':')
            .ok_or_else(|| Error::DegenerateParams(format!("expected <family>:<params>, got `{raw}`")))?;
        let nums: Vec<usize> = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::DegenerateParams(format!("bad integer `{t}` in `{raw}`")))
            })
            .collect::<Result<_>>()?;
        if nums.contains(&0) {
            return Err(Error::DegenerateParams(format!("parameters must be positive in `{raw}`")));
        }
        let (family, params) = if name == "hyperbolic" {
            if nums.len() != 1 || nums[0] < 2 {
                return Err(Error::DegenerateParams(format!(
                    "hyperbolic:n needs a single n >= 2, got `{raw}`"
                )));
            }
            (Family::So, vec![nums[0], 1])
        } else {
            (name.parse::<Family>()?, nums)
        };
        // reuse the realization's parameter rules
        LieAlgebraRealization::new(family, &params).map(|_| ())?;
        Ok(SpaceSpec { raw, family, params })
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// Precomputed blocks of `ad_{p_i}: p -> t` in the orthonormal frame, so
/// that `R_xi = T^T T` with `T = sum_i xi_i T_i` is cheap to assemble.
#[derive(Debug, Clone)]
pub struct CurvatureModel {
    t_blocks: Vec<DMatrix<f64>>,
    pub dim_t: usize,
    pub dim_p: usize,
}

impl CurvatureModel {
    pub fn new(alg: &LieAlgebraRealization, dec: &CartanDecomposition) -> Result<Self> {
        let dim_t = dec.dim_t;
        let dim_p = dec.dim_p;
        let mut t_blocks = Vec::with_capacity(dim_p);
        for p in &dec.p_basis {
            let full = dec.to_frame(alg, &alg.ad_matrix(p)?);
            t_blocks.push(full.view((0, dim_t), (dim_t, dim_p)).into_owned());
        }
        Ok(Self {
            t_blocks,
            dim_t,
            dim_p,
        })
    }

    /// `T = ad_xi : p -> t` for `xi` given in orthonormal `p` coordinates.
    pub fn t_operator(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.dim_t, self.dim_p);
        for (c, b) in xi.iter().zip(&self.t_blocks) {
            if *c != 0.0 {
                t += b * *c;
            }
        }
        t
    }

    /// Matrix of `R_xi` on `p`.
    pub fn operator(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let t = self.t_operator(xi);
        t.transpose() * t
    }

    /// Sorted eigenvalues of `R_xi` on `p`.
    pub fn spectrum(&self, xi: &DVector<f64>) -> Vec<f64> {
        sym_eigen(&self.operator(xi)).values.iter().cloned().collect()
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricSpace {
    pub spec: SpaceSpec,
    pub alg: LieAlgebraRealization,
    pub dec: CartanDecomposition,
    /// Root system with the positive chamber fixed.
    pub roots: RootSystem,
    pub curvature: CurvatureModel,
}

/// Seed for the chamber witness when none is supplied.
pub const DEFAULT_CHAMBER_SEED: u64 = 0x5eed;

impl SymmetricSpace {
    pub fn new(family: Family, params: &[usize]) -> Result<Self> {
        let alg = LieAlgebraRealization::new(family, params)?;
        let p: Vec<String> = params.iter().map(|x| x.to_string()).collect();
        let spec = SpaceSpec {
            raw: format!("{family}:{}", p.join(",")),
            family,
            params: params.to_vec(),
        };
        Self::assemble(spec, alg)
    }

    pub fn from_spec(spec: &SpaceSpec) -> Result<Self> {
        let alg = LieAlgebraRealization::new(spec.family, &spec.params)?;
        Self::assemble(spec.clone(), alg)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_spec(&s.parse()?)
    }

    pub fn from_algebra(alg: LieAlgebraRealization) -> Result<Self> {
        let spec = SpaceSpec {
            raw: alg.label(),
            family: alg.family,
            params: alg.params.clone(),
        };
        Self::assemble(spec, alg)
    }

    fn assemble(spec: SpaceSpec, alg: LieAlgebraRealization) -> Result<Self> {
        let dec = alg.cartan_decompose()?;
        let a = maximal_abelian(&alg, &dec)?;
        let rs = restricted_roots(&alg, &dec, &a)?;
        let roots = choose_positive(&rs, None, DEFAULT_CHAMBER_SEED)?;
        let curvature = CurvatureModel::new(&alg, &dec)?;
        Ok(Self {
            spec,
            alg,
            dec,
            roots,
            curvature,
        })
    }

    pub fn dim_m(&self) -> usize {
        self.dec.dim_p
    }

    pub fn rank(&self) -> usize {
        self.roots.a.rank
    }

    pub fn h(&self) -> &AlgebraElement {
        self.roots.h.as_ref().expect("positive chamber is fixed at construction")
    }

    pub fn norm_h(&self) -> f64 {
        self.alg.norm(self.h())
    }

    /// Element of `a` from orthonormal `a_basis` coordinates.
    pub fn a_element(&self, coords: &DVector<f64>) -> AlgebraElement {
        self.roots.a.element(coords)
    }

    pub fn p_coords(&self, x: &AlgebraElement) -> DVector<f64> {
        self.dec.p_coords(&self.alg, x)
    }

    pub fn p_element(&self, coords: &DVector<f64>) -> AlgebraElement {
        self.dec.from_p_coords(coords)
    }

    /// Orthonormal `a` coordinates of the positive-chamber vector `H`.
    pub fn h_coords(&self) -> DVector<f64> {
        self.roots.h_coords().expect("positive chamber is fixed at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        let s: SpaceSpec = "hyperbolic:4".parse().unwrap();
        assert_eq!((s.family, s.params.clone()), (Family::So, vec![4, 1]));
        let s: SpaceSpec = "su:2,1".parse().unwrap();
        assert_eq!((s.family, s.params), (Family::Su, vec![2, 1]));
        assert!("so:3,0".parse::<SpaceSpec>().is_err());
        assert!("e:6".parse::<SpaceSpec>().is_err());
        assert!("sl".parse::<SpaceSpec>().is_err());
        assert!("sl:x".parse::<SpaceSpec>().is_err());
        assert!("hyperbolic:1".parse::<SpaceSpec>().is_err());
    }

    #[test]
    fn fast_curvature_matches_direct_ad() {
        let sp = SymmetricSpace::new(Family::Sl, &[3]).unwrap();
        let xi = DVector::from_vec(vec![0.3, -0.2, 0.5, 0.1, 0.7]);
        let fast = sp.curvature.operator(&xi);
        let elt = sp.p_element(&xi);
        let ad = sp.alg.ad_matrix(&elt).unwrap();
        let full = sp.dec.to_frame(&sp.alg, &(&ad * &ad));
        let t = sp.dec.dim_t;
        let direct = full.view((t, t), (5, 5)).into_owned();
        assert!((fast - direct).amax() < 1e-13);
    }
}

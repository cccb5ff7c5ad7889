//! TOML run configuration.
//!
//! ```toml
//! [ring]
//! p = 2
//! lambda_pexp = 2          # Λ = (Z/p^n)[x]/(lambda_modulus)
//! lambda_modulus = "x"
//! precision = 4            # N, the precision of the lift Λ̃
//!
//! [crystal]
//! dim = 1
//! a = "1"
//! matrix = [["z1"]]
//! m_denom = 0
//! normalize = false
//!
//! [run]
//! degree_bound = 3
//! trace_max = 4
//! strat_b = ["z1 + 1"]
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::crystal::{CrystalPair, UnitCrystal};
use crate::error::{Error, Result};
use crate::laurent::{parse_laurent, LaurentPolynomial};
use crate::ring::{FlatLift, RingDescriptor};

const DEFAULT_NORMALIZE_SEARCH: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub p: u64,
    #[serde(default = "default_pexp")]
    pub lambda_pexp: u32,
    /// Defaults to lambda_pexp + 2.
    pub precision: Option<u32>,
    #[serde(default = "default_modulus")]
    pub lambda_modulus: String,
}

fn default_pexp() -> u32 {
    1
}

fn default_modulus() -> String {
    "x".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalSection {
    pub dim: usize,
    pub rank: Option<usize>,
    #[serde(default = "default_a")]
    pub a: String,
    pub matrix: Vec<Vec<String>>,
    #[serde(default)]
    pub m_denom: u32,
    #[serde(default)]
    pub normalize: bool,
    /// Largest N_e tried when clearing denominators.
    pub normalize_search: Option<u32>,
    /// Overrides the automatic choice of u.
    pub sheaf_twist: Option<u32>,
}

fn default_a() -> String {
    "1".into()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub degree_bound: Option<usize>,
    pub trace_max: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub strat_b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ring: RingSection,
    pub crystal: CrystalSection,
    #[serde(default)]
    pub run: RunSection,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision.unwrap_or(self.ring.lambda_pexp + 2)
    }

    pub fn degree_bound(&self) -> usize {
        self.run.degree_bound.unwrap_or(4)
    }

    pub fn trace_max(&self) -> u32 {
        self.run.trace_max.unwrap_or(4)
    }

    /// Λ = (Z/p^n)[x]/(g).
    pub fn lambda(&self) -> Result<Arc<RingDescriptor>> {
        let g = parse_modulus(&self.ring.lambda_modulus, self.ring.p, self.ring.lambda_pexp)?;
        Ok(Arc::new(RingDescriptor::local_algebra(
            self.ring.p,
            self.ring.lambda_pexp,
            self.ring.lambda_pexp,
            &g,
        )?))
    }

    pub fn flat_lift(&self) -> Result<FlatLift> {
        FlatLift::new(&self.lambda()?, self.precision())
    }

    /// The crystal over `ring` exactly as written in the file.
    pub fn crystal(&self, ring: &Arc<RingDescriptor>) -> Result<UnitCrystal> {
        let s = &self.crystal;
        if let Some(rank) = s.rank {
            if rank != s.matrix.len() {
                return Err(Error::Config(format!(
                    "rank {rank} but the matrix has {} rows",
                    s.matrix.len()
                )));
            }
        }
        let a = parse_laurent(&s.a, ring, s.dim)?;
        let matrix = s
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| parse_laurent(e, ring, s.dim)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        UnitCrystal::new(a, matrix, s.m_denom)
    }

    /// Normalized crystal over Λ with its lift to Λ̃.
    pub fn prepare(&self) -> Result<CrystalPair> {
        let lift = self.flat_lift()?;
        let c = self.crystal(lift.lambda())?;
        let search = self
            .crystal
            .normalize
            .then(|| self.crystal.normalize_search.unwrap_or(DEFAULT_NORMALIZE_SEARCH));
        let mut pair = CrystalPair::prepare(&c, &lift, search)?;
        if let Some(u) = self.crystal.sheaf_twist {
            pair.lambda_crystal = pair.lambda_crystal.with_given_sheaf_twist(u)?;
            pair.lifted = pair.lifted.with_given_sheaf_twist(u)?;
        }
        Ok(pair)
    }

    pub fn strat_polys(&self, ring: &Arc<RingDescriptor>) -> Result<Vec<LaurentPolynomial>> {
        self.run
            .strat_b
            .iter()
            .map(|b| parse_laurent(b, ring, self.crystal.dim))
            .collect()
    }
}

/// Integer coefficients of a polynomial in x, written in the crystal
/// grammar with x in place of z1.
pub fn parse_modulus(text: &str, p: u64, pexp: u32) -> Result<Vec<i64>> {
    if let Some(pos) = text.find(|ch: char| !(ch.is_ascii_digit() || " \tx^+-*()".contains(ch))) {
        return Err(Error::Syntax {
            pos,
            msg: format!("unexpected character in modulus: {:?}", &text[pos..pos + 1]),
        });
    }
    let ring = Arc::new(RingDescriptor::base(p, pexp)?);
    let rewritten = text.replace('x', "z1");
    let f = parse_laurent(&rewritten, &ring, 1).map_err(|e| match e {
        Error::Syntax { pos, msg } => {
            // undo the one-character shift introduced by each substitution
            let shift = text
                .char_indices()
                .filter(|&(i, ch)| ch == 'x' && i + text[..i].matches('x').count() < pos)
                .count();
            Error::Syntax { pos: pos - shift, msg }
        }
        other => other,
    })?;
    let mut coeffs = Vec::new();
    for (e, c) in f.terms() {
        let k = usize::try_from(e[0])
            .map_err(|_| Error::Config("negative power of x in lambda_modulus".into()))?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] = c.coords[0] as i64;
    }
    Ok(coeffs)
}

//! Problem ids and parameter flags, resolved against a graph.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cwcolor::{Builtin, DegreeConstraintMatrix, Graph, Ratio, RomanVariant, WeightSet};

use crate::Failure;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Variant {
    Strict,
    Paper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Objective {
    Min,
    Max,
    Decision,
}

#[derive(Args, Clone, Debug)]
pub struct ProblemArgs {
    /// kcoloring, mis, mds, odd-ds, kroman, lcvp, global-kroman, community,
    /// pds or quasi-clique; a trailing number sets `--k` (`kroman2`).
    #[arg(long)]
    pub problem: String,
    #[arg(long)]
    pub k: Option<u32>,
    /// Fixed class sizes for a size-constrained problem. Without it the
    /// problem's driver searches all sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<u32>>,
    /// Density `p/r` for quasi-clique.
    #[arg(long)]
    pub gamma: Option<Ratio>,
    /// File listing vertices that must lie in the PDS, whitespace separated.
    #[arg(long)]
    pub required: Option<PathBuf>,
    /// Complement-side check used by global-kroman.
    #[arg(long, value_enum, default_value_t = Variant::Strict)]
    pub variant: Variant,
    /// Community parts of equal size.
    #[arg(long)]
    pub balanced: bool,
    /// LCVP degree matrix `row;row`, entries `*`, `-`, `0|2` or `~0`.
    #[arg(long)]
    pub lcvp: Option<String>,
    /// LCVP per-color weights.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Option<Vec<i64>>,
    #[arg(long, value_enum, default_value_t = Objective::Min)]
    pub objective: Objective,
}

/// What `solve` and `oracle` act on: a single model, or a driver that
/// searches over class sizes.
#[derive(Clone, Debug)]
pub enum Problem {
    Model(Builtin),
    GlobalRoman { k: u32, variant: RomanVariant },
    Community { k: u32, balanced: bool },
    Pds { required: Vec<String> },
    QuasiClique { gamma: Ratio },
}

/// Splits `kroman2` into `("kroman", Some(2))`.
pub fn split_id(id: &str) -> (&str, Option<u32>) {
    let digits = id.len() - id.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits == 0 || digits == id.len() {
        return (id, None);
    }
    let (name, k) = id.split_at(id.len() - digits);
    (name.trim_end_matches('-'), k.parse().ok())
}

impl ProblemArgs {
    pub fn resolve(&self, g: &Graph) -> Result<Problem, Failure> {
        let (name, inline_k) = split_id(&self.problem);
        let k = self.k.or(inline_k);
        let need_k = || k.ok_or_else(|| Failure::usage(format!("problem `{name}` needs --k")));
        let variant = match self.variant {
            Variant::Strict => RomanVariant::Strict,
            Variant::Paper => RomanVariant::Paper,
        };
        let single = |what: &str| -> Result<u32, Failure> {
            match self.sizes.as_deref() {
                Some([s]) => Ok(*s),
                _ => Err(Failure::usage(format!("{what} takes --sizes <|S|>"))),
            }
        };
        Ok(match name {
            "kcoloring" => Problem::Model(Builtin::KColoring { k: need_k()? }),
            "mis" => Problem::Model(Builtin::MaxIndependentSet),
            "mds" | "min-dominating-set" => Problem::Model(Builtin::MinDominatingSet),
            "odd-ds" | "odd-dominating-set" => Problem::Model(Builtin::OddDominatingSet),
            "kroman" => Problem::Model(Builtin::KRoman { k: need_k()? }),
            "lcvp" => {
                let text = self.lcvp.as_deref().ok_or_else(|| Failure::usage("lcvp needs --lcvp"))?;
                let d = DegreeConstraintMatrix::parse(text).map_err(Failure::usage)?;
                let weights = self.weights.clone().unwrap_or_else(|| vec![0; d.q()]);
                let weight_set = match self.objective {
                    Objective::Min => WeightSet::MinSum,
                    Objective::Max => WeightSet::MaxSum,
                    Objective::Decision => WeightSet::Decision,
                };
                Problem::Model(Builtin::Lcvp { d, weights, weight_set })
            }
            "global-kroman" => match &self.sizes {
                Some(sizes) => {
                    Problem::Model(Builtin::SpecifiedSizeGlobalKRoman { k: need_k()?, sizes: sizes.clone(), variant })
                }
                None => Problem::GlobalRoman { k: need_k()?, variant },
            },
            "community" => match &self.sizes {
                Some(sizes) => Problem::Model(Builtin::SpecifiedSizeKCommunity { sizes: sizes.clone() }),
                None => Problem::Community { k: k.unwrap_or(2), balanced: self.balanced },
            },
            "pds" => {
                let required = self.required_vertices(g)?;
                match self.sizes {
                    Some(_) => Problem::Model(Builtin::SpecifiedSizePds { s_in: single("pds")?, required }),
                    None => Problem::Pds { required },
                }
            }
            "quasi-clique" => {
                let gamma = match self.gamma {
                    Some(g) => g,
                    None => Ratio::new(1, 2).map_err(Failure::usage)?,
                };
                match self.sizes {
                    Some(_) => Problem::Model(Builtin::QuasiClique { gamma, s_in: single("quasi-clique")? }),
                    None => Problem::QuasiClique { gamma },
                }
            }
            _ => return Err(Failure::usage(format!("unknown problem `{}`", self.problem))),
        })
    }

    fn required_vertices(&self, g: &Graph) -> Result<Vec<String>, Failure> {
        let Some(path) = &self.required else {
            return Ok(Vec::new());
        };
        let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let names: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        if let Some(v) = names.iter().find(|v| g.index_of(v).is_none()) {
            return Err(Failure::mismatch(format!("required vertex `{v}` is not in the graph")));
        }
        Ok(names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_split_off_k() {
        assert_eq!(split_id("kroman2"), ("kroman", Some(2)));
        assert_eq!(split_id("kcoloring3"), ("kcoloring", Some(3)));
        assert_eq!(split_id("global-kroman-1"), ("global-kroman", Some(1)));
        assert_eq!(split_id("mis"), ("mis", None));
        assert_eq!(split_id("42"), ("42", None));
    }
}

//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::TableVariant;
use crate::fock::{FockModel, HalfInt, Sector};
use crate::lattice::Algebra;
use crate::verifier::{Relation, SweepBounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantChoice {
    PaperLiteral,
    Systematic,
    Both,
}

impl VariantChoice {
    pub fn variants(self) -> Vec<TableVariant> {
        match self {
            VariantChoice::PaperLiteral => vec![TableVariant::PaperLiteral],
            VariantChoice::Systematic => vec![TableVariant::Systematic],
            VariantChoice::Both => vec![TableVariant::PaperLiteral, TableVariant::Systematic],
        }
    }
}

impl FromStr for VariantChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "both" {
            return Ok(VariantChoice::Both);
        }
        match s.parse::<TableVariant>() {
            Ok(TableVariant::PaperLiteral) => Ok(VariantChoice::PaperLiteral),
            Ok(TableVariant::Systematic) => Ok(VariantChoice::Systematic),
            Err(_) => Err(Error::parse(s, "variant must be `paper-literal`, `systematic` or `both`")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::parse(s, "output must be `text` or `json`")),
        }
    }
}

/// A fully resolved run configuration.
///
/// `workers` is not echoed into reports: it cannot change their content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub algebra: Algebra,
    pub rank: usize,
    pub sector: Sector,
    pub variant: VariantChoice,
    pub model: FockModel,
    pub max_degree: HalfInt,
    pub max_mode: i64,
    pub zero_mode_cap: usize,
    pub serre_max_degree: HalfInt,
    pub serre_max_mode: i64,
    pub relations: BTreeSet<Relation>,
    #[serde(skip)]
    pub workers: usize,
    pub output: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_path: Option<PathBuf>,
}

impl VerifyConfig {
    pub fn bounds(&self) -> SweepBounds {
        SweepBounds {
            max_degree: self.max_degree,
            max_mode: self.max_mode,
            zero_mode_cap: self.zero_mode_cap,
            serre_max_degree: self.serre_max_degree,
            serre_max_mode: self.serre_max_mode,
        }
    }
}

/// Raw settings as strings, shared by the config file and the flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize, clap::Args)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    /// A, B, C or D.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub algebra: Option<String>,
    /// The n of the construction (type A with n gives A_{n-1}).
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub rank: Option<String>,
    /// ns or r.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub sector: Option<String>,
    /// paper-literal, systematic or both.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub variant: Option<String>,
    /// irreducible (default) or full.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub model: Option<String>,
    /// Largest state degree, e.g. 2 or 3/2.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub max_degree: Option<String>,
    /// Largest |m| of field modes.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(deserialize_with = "loose")]
    pub max_mode: Option<String>,
    /// Largest number of zero modes in an R-sector state.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub zero_mode_cap: Option<String>,
    /// Largest state degree for the Serre sweep.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub serre_max_degree: Option<String>,
    /// Largest |m| for the Serre sweep.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(deserialize_with = "loose")]
    pub serre_max_mode: Option<String>,
    /// Comma-separated subset of R0..R4,S1..S3.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub relations: Option<String>,
    /// Worker threads for the sweep.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub workers: Option<String>,
    /// text or json.
    #[arg(long)]
    #[serde(deserialize_with = "loose")]
    pub output: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long = "out")]
    #[serde(deserialize_with = "loose")]
    pub out_path: Option<String>,
}

/// Accepts a string, a number or a list of strings (joined with commas).
fn loose<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<String>, D::Error> {
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = Option<String>;
        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a string, integer or list of strings")
        }
        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
            Ok(Some(v.to_string()))
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
            Ok(Some(v.to_string()))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
            Ok(Some(v.to_string()))
        }
        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
            let mut parts = Vec::new();
            while let Some(s) = seq.next_element::<String>()? {
                parts.push(s);
            }
            Ok(Some(parts.join(",")))
        }
    }
    d.deserialize_any(V)
}

macro_rules! overlay {
    ($a:expr, $b:expr, $($f:ident),*) => {
        Overrides { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Overrides {
    /// `self` wins field by field.
    pub fn over(self, base: Overrides) -> Overrides {
        overlay!(
            self,
            base,
            algebra,
            rank,
            sector,
            variant,
            model,
            max_degree,
            max_mode,
            zero_mode_cap,
            serre_max_degree,
            serre_max_mode,
            relations,
            workers,
            output,
            out_path
        )
    }

    pub fn from_toml(text: &str) -> Result<Overrides> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Overrides> {
        let text =
            std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self) -> Result<VerifyConfig> {
        fn get<T: FromStr<Err = Error>>(v: &Option<String>, default: Option<T>, name: &str) -> Result<T> {
            match v {
                Some(s) => s.parse(),
                None => default.ok_or_else(|| Error::Config(format!("missing required setting `{name}`"))),
            }
        }
        fn int<T: FromStr>(v: &Option<String>, default: T, name: &str) -> Result<T> {
            match v {
                Some(s) => {
                    s.trim().parse().map_err(|_| Error::parse(s, format!("{name} must be a non-negative integer")))
                }
                None => Ok(default),
            }
        }
        fn opt<T: FromStr>(v: &Option<String>, name: &str) -> Result<Option<T>> {
            match v {
                Some(s) => s
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::parse(s, format!("{name} must be a non-negative integer"))),
                None => Ok(None),
            }
        }
        let d = SweepBounds::default();
        let max_degree: HalfInt = get(&self.max_degree, Some(d.max_degree), "max_degree")?;
        let serre_max_degree: HalfInt = get(&self.serre_max_degree, Some(d.serre_max_degree), "serre_max_degree")?;
        for (name, v) in [("max_degree", max_degree), ("serre_max_degree", serre_max_degree)] {
            if v.doubled() < 0 {
                return Err(Error::Config(format!("{name} must be non-negative")));
            }
        }
        let max_mode: i64 = int(&self.max_mode, d.max_mode, "max_mode")?;
        let serre_max_mode: i64 = int(&self.serre_max_mode, d.serre_max_mode, "serre_max_mode")?;
        if max_mode < 0 || serre_max_mode < 0 {
            return Err(Error::Config("mode bounds must be non-negative".into()));
        }
        let workers = match &self.workers {
            Some(_) => int(&self.workers, 1usize, "workers")?,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        let relations = match &self.relations {
            None => Relation::ALL.into_iter().collect(),
            Some(s) => s
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(str::parse)
                .collect::<Result<BTreeSet<Relation>>>()?,
        };
        Ok(VerifyConfig {
            algebra: get(&self.algebra, None, "algebra")?,
            rank: opt::<usize>(&self.rank, "rank")?
                .ok_or_else(|| Error::Config("missing required setting `rank`".into()))?,
            sector: get(&self.sector, Some(Sector::Ns), "sector")?,
            variant: get(&self.variant, Some(VariantChoice::Systematic), "variant")?,
            model: get(&self.model, Some(FockModel::Irreducible), "model")?,
            max_degree,
            max_mode,
            zero_mode_cap: int(&self.zero_mode_cap, d.zero_mode_cap, "zero_mode_cap")?,
            serre_max_degree,
            serre_max_mode,
            relations,
            workers,
            output: get(&self.output, Some(OutputFormat::Text), "output")?,
            out_path: self.out_path.as_ref().map(PathBuf::from),
        })
    }
}

/// Reads `file` if given, overlays `flags`, and resolves.
pub fn parse_config(file: Option<&Path>, flags: Overrides) -> Result<VerifyConfig> {
    let base = match file {
        Some(p) => Overrides::from_file(p)?,
        None => Overrides::default(),
    };
    flags.over(base).resolve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(pairs: &[(&str, &str)]) -> Overrides {
        let mut o = Overrides::default();
        for (k, v) in pairs {
            let v = Some(v.to_string());
            match *k {
                "algebra" => o.algebra = v,
                "rank" => o.rank = v,
                "max_degree" => o.max_degree = v,
                "relations" => o.relations = v,
                "workers" => o.workers = v,
                _ => unreachable!(),
            }
        }
        o
    }

    #[test]
    fn half_integer_degree_is_doubled() {
        let c = flags(&[("algebra", "C"), ("rank", "2"), ("max_degree", "3/2")]).resolve().unwrap();
        assert_eq!(c.max_degree.doubled(), 3);
        assert_eq!(c.relations.len(), 8);
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(flags(&[("algebra", "E"), ("rank", "2")]).resolve().is_err());
        assert!(flags(&[("algebra", "A"), ("rank", "2"), ("max_degree", "1/3")]).resolve().is_err());
        assert!(flags(&[("algebra", "A"), ("rank", "2"), ("max_degree", "-1")]).resolve().is_err());
        assert!(flags(&[("algebra", "A"), ("rank", "2"), ("workers", "0")]).resolve().is_err());
        assert!(flags(&[("algebra", "A"), ("rank", "2"), ("relations", "R9")]).resolve().is_err());
        assert!(flags(&[("algebra", "A")]).resolve().is_err());
    }

    #[test]
    fn file_values_yield_to_flags() {
        let file = Overrides::from_toml(
            "algebra = \"D\"\nrank = 4\nmax_degree = \"3/2\"\nrelations = [\"R1\", \"R3\"]\nworkers = 2\n",
        )
        .unwrap();
        let c = flags(&[("rank", "5")]).over(file).resolve().unwrap();
        assert_eq!((c.algebra, c.rank, c.max_degree.doubled(), c.workers), (Algebra::D, 5, 3, 2));
        assert_eq!(c.relations, [Relation::R1, Relation::R3].into_iter().collect());
    }

    #[test]
    fn unknown_file_keys_are_errors() {
        assert!(Overrides::from_toml("algebre = \"A\"").is_err());
        assert!(Overrides::from_toml("rank = [").is_err());
    }
}

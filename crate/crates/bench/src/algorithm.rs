use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use subsel_core::{
    dominant_full, dominant_split, ExchangeConfig, IndexSubset, InitKind, InitStrategy, Matrix, Result,
};

use crate::error::{usage, RunError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Best-pair exchange.
    Dominant,
    /// Add-then-remove exchange.
    DominantSplit,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Dominant => "Dominant",
            Engine::DominantSplit => "Dominant-split",
        }
    }
}

/// An initializer optionally followed by an exchange engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Algorithm {
    pub init: InitKind,
    pub engine: Option<Engine>,
}

const INITS: [InitKind; 3] = [InitKind::Cpqr, InitKind::Greedy, InitKind::Advanced];

impl Algorithm {
    /// The six initializer/engine combinations, in the order used for reports.
    pub fn table() -> Vec<Algorithm> {
        INITS
            .iter()
            .flat_map(|&init| {
                [Engine::Dominant, Engine::DominantSplit].map(|e| Algorithm {
                    init,
                    engine: Some(e),
                })
            })
            .collect()
    }

    pub fn initializers() -> Vec<Algorithm> {
        INITS.iter().map(|&init| Algorithm { init, engine: None }).collect()
    }

    pub fn name(&self) -> String {
        match self.engine {
            Some(e) => format!("{}-{}", e.name(), self.init.name()),
            None => self.init.name().to_string(),
        }
    }

    pub fn is_exchange(&self) -> bool {
        self.engine.is_some()
    }

    pub fn run(&self, x: &Matrix, k: usize, c: f64) -> Result<AlgorithmRun> {
        let t0 = Instant::now();
        let start = InitStrategy {
            kind: self.init,
            k,
            c,
        }
        .run(x)?;
        let init_time = t0.elapsed();

        let t1 = Instant::now();
        let (selection, swaps, capped) = match self.engine {
            None => (start, 0, false),
            Some(engine) => {
                let cfg = ExchangeConfig::with_c(c);
                let out = match engine {
                    Engine::Dominant => dominant_full(x, &start, &cfg)?,
                    Engine::DominantSplit => dominant_split(x, &start, &cfg)?,
                };
                let capped = out.terminated_by == subsel_core::Termination::Cap;
                (out.selection, out.swaps.len(), capped)
            }
        };
        Ok(AlgorithmRun {
            selection,
            swaps,
            capped,
            init_time,
            exchange_time: t1.elapsed(),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Algorithm {
    type Err = RunError;

    fn from_str(s: &str) -> std::result::Result<Self, RunError> {
        Algorithm::table()
            .into_iter()
            .chain(Algorithm::initializers())
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| {
                let known: Vec<String> = Algorithm::table()
                    .iter()
                    .chain(&Algorithm::initializers())
                    .map(Algorithm::name)
                    .collect();
                usage(format!("unknown algorithm '{s}' (known: {})", known.join(", ")))
            })
    }
}

pub fn parse_algorithms(list: &str) -> std::result::Result<Vec<Algorithm>, RunError> {
    let algos = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if algos.is_empty() {
        return Err(usage("empty algorithm list"));
    }
    Ok(algos)
}

#[derive(Clone, Debug)]
pub struct AlgorithmRun {
    pub selection: IndexSubset,
    pub swaps: usize,
    pub capped: bool,
    pub init_time: Duration,
    pub exchange_time: Duration,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_names() {
        let names: Vec<String> = Algorithm::table().iter().map(Algorithm::name).collect();
        assert_eq!(
            names,
            [
                "Dominant-CPQR",
                "Dominant-split-CPQR",
                "Dominant-greedy",
                "Dominant-split-greedy",
                "Dominant-advanced",
                "Dominant-split-advanced"
            ]
        );
    }

    #[test]
    fn parse_round_trip() {
        for a in Algorithm::table().into_iter().chain(Algorithm::initializers()) {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("Maxvol".parse::<Algorithm>().is_err());
        assert_eq!(parse_algorithms("CPQR, Dominant-split-greedy").unwrap().len(), 2);
        assert!(parse_algorithms(" , ").is_err());
    }
}

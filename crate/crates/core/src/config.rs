//! Scenario configuration: a flat key = value text format with a strict
//! parser. Unknown keys and duplicate keys are fatal, every violation names
//! the key and line, and the resolved configuration can be echoed back out
//! so each run's outputs carry the exact settings that produced them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::datum::{DatumRecipe, PresetKind};
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::grid::{DomainKind, Grid};

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub domain: DomainKind,
    pub extents: [f64; 3],
    pub counts: [usize; 3],
    pub eos: EquationOfState<f64>,
    pub background_c: f64,
    pub recipe: DatumRecipe,
    pub cfl: f64,
    pub epsilon: f64,
    pub t_end: f64,
    /// 0 = no cap.
    pub max_steps: u64,
    pub diag_every: u64,
    /// 0 = initial and final snapshot only.
    pub snapshot_every: u64,
    pub output_dir: PathBuf,
    pub require_compat: bool,
    pub seed: u64,
    pub serial_reductions: bool,
    /// Tolerance factor of the compatibility checker.
    pub compat_factor: f64,
    /// |H1| lower bound on the x1 wall, as a fraction of |c|.
    pub h1_threshold_frac: f64,
    /// Absolute override for the divergence condition (0 = use the default).
    pub divfree_tol: f64,
    /// Acceptance knob: allowed growth factor of the H3 norm over a run.
    pub persistence_factor: f64,
    /// Acceptance knob: allowed div-H growth as a multiple of h^2.
    pub divh_growth_factor: f64,
}

pub const KEY_HELP: &str = "\
configuration keys (key = value, '#' comments, unknown keys are fatal):
  domain            quarter | half | periodic        (required)
  n1, n2, n3        cell counts                      (required; runs need >= 16)
  t_end             final time                       (required)
  l1, l2, l3        box extents                      (default 1.0; half spans [-l3, l3])
  eos               exponential | polytropic         (default exponential)
  kappa             exponential scale                (default 1.0)
  gamma, c_v        polytropic exponent / heat cap.  (defaults 1.6666666666666667, 1.0)
  background_c      background H1, must be nonzero   (default 1.0)
  preset            constant | interior-bump | symmetric-perturbation | alfven-periodic
                                                     (default constant)
  amplitude         perturbation amplitude           (default 0.01)
  width             bump support radius              (default 0.2)
  center1..center3  bump center                      (default 0.5 each; symmetric preset pins center3 = 0)
  p_amplitude       pressure bump amplitude          (default 0.0)
  mode              wavenumber index for alfven-periodic (default 1)
  cfl               CFL number in (0, 1]             (default 0.5)
  epsilon           dissipation coefficient >= 0     (default 0.02)
  max_steps         step cap, 0 = none               (default 0)
  diag_every        diagnostics cadence in steps     (default 1)
  snapshot_every    snapshot cadence, 0 = ends only  (default 0)
  output_dir        output directory                 (default out)
  require_compat    gate runs on the compatibility check (default true)
  seed              RNG seed for verification suites (default 0)
  serial_reductions strictly serial reductions       (default false)
  compat_factor     compatibility tolerance factor   (default 10.0)
  h1_threshold_frac |H1| wall bound as fraction of |c| (default 0.1)
  divfree_tol       absolute div-H tolerance, 0 = default scaling (default 0)
  persistence_factor  allowed H3-norm growth factor  (default 2.0)
  divh_growth_factor  allowed div-H growth / h^2     (default 10.0)
";

impl ScenarioConfig {
    pub fn grid(&self) -> Result<Grid<f64>> {
        Grid::new(self.domain, self.extents, self.counts)
    }

    /// Renders the fully resolved configuration in the input format.
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("domain = {}\n", self.domain.name()));
        for (i, v) in self.extents.iter().enumerate() {
            s.push_str(&format!("l{} = {v:?}\n", i + 1));
        }
        for (i, v) in self.counts.iter().enumerate() {
            s.push_str(&format!("n{} = {v}\n", i + 1));
        }
        match self.eos {
            EquationOfState::Exponential { kappa } => {
                s.push_str("eos = exponential\n");
                s.push_str(&format!("kappa = {kappa:?}\n"));
            }
            EquationOfState::Polytropic { gamma, c_v } => {
                s.push_str("eos = polytropic\n");
                s.push_str(&format!("gamma = {gamma:?}\n"));
                s.push_str(&format!("c_v = {c_v:?}\n"));
            }
        }
        s.push_str(&format!("background_c = {:?}\n", self.background_c));
        s.push_str(&format!("preset = {}\n", self.recipe.kind.name()));
        s.push_str(&format!("amplitude = {:?}\n", self.recipe.amplitude));
        s.push_str(&format!("width = {:?}\n", self.recipe.width));
        for (i, v) in self.recipe.center.iter().enumerate() {
            s.push_str(&format!("center{} = {v:?}\n", i + 1));
        }
        s.push_str(&format!("p_amplitude = {:?}\n", self.recipe.p_amplitude));
        s.push_str(&format!("mode = {}\n", self.recipe.mode));
        s.push_str(&format!("cfl = {:?}\n", self.cfl));
        s.push_str(&format!("epsilon = {:?}\n", self.epsilon));
        s.push_str(&format!("t_end = {:?}\n", self.t_end));
        s.push_str(&format!("max_steps = {}\n", self.max_steps));
        s.push_str(&format!("diag_every = {}\n", self.diag_every));
        s.push_str(&format!("snapshot_every = {}\n", self.snapshot_every));
        s.push_str(&format!("output_dir = {}\n", self.output_dir.display()));
        s.push_str(&format!("require_compat = {}\n", self.require_compat));
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("serial_reductions = {}\n", self.serial_reductions));
        s.push_str(&format!("compat_factor = {:?}\n", self.compat_factor));
        s.push_str(&format!("h1_threshold_frac = {:?}\n", self.h1_threshold_frac));
        s.push_str(&format!("divfree_tol = {:?}\n", self.divfree_tol));
        s.push_str(&format!("persistence_factor = {:?}\n", self.persistence_factor));
        s.push_str(&format!("divh_growth_factor = {:?}\n", self.divh_growth_factor));
        s
    }
}

struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            None => Ok(default),
            Some((line, v)) => v.parse().map_err(|_| Error::Config {
                line: Some(line),
                msg: format!("key '{key}': expected a number, got {v:?}"),
            }),
        }
    }

    fn usize_(&mut self, key: &str) -> Result<Option<(usize, usize)>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => {
                let parsed = v.parse().map_err(|_| Error::Config {
                    line: Some(line),
                    msg: format!("key '{key}': expected a non-negative integer, got {v:?}"),
                })?;
                Ok(Some((line, parsed)))
            }
        }
    }

    fn u64_(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.take(key) {
            None => Ok(default),
            Some((line, v)) => v.parse().map_err(|_| Error::Config {
                line: Some(line),
                msg: format!("key '{key}': expected a non-negative integer, got {v:?}"),
            }),
        }
    }

    fn bool_(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.take(key) {
            None => Ok(default),
            Some((line, v)) => match v.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(Error::Config {
                    line: Some(line),
                    msg: format!("key '{key}': expected true or false, got {v:?}"),
                }),
            },
        }
    }
}

pub fn parse_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: None,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ScenarioConfig> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config {
                line: Some(line_no),
                msg: format!("expected 'key = value', got {line:?}"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if let Some((first, _)) = entries.get(&key) {
            return Err(Error::Config {
                line: Some(line_no),
                msg: format!("key '{key}' already set on line {first}"),
            });
        }
        entries.insert(key, (line_no, value));
    }
    let mut raw = RawConfig { entries };

    let domain = match raw.take("domain") {
        None => {
            return Err(Error::Config {
                line: None,
                msg: "missing required key 'domain'".into(),
            })
        }
        Some((line, v)) => DomainKind::parse(&v).ok_or_else(|| Error::Config {
            line: Some(line),
            msg: format!("key 'domain': expected quarter, half or periodic, got {v:?}"),
        })?,
    };

    let mut counts = [0usize; 3];
    for (i, slot) in counts.iter_mut().enumerate() {
        let key = format!("n{}", i + 1);
        match raw.usize_(&key)? {
            Some((line, v)) => {
                if v == 0 {
                    return Err(Error::Config {
                        line: Some(line),
                        msg: format!("key '{key}' must be positive"),
                    });
                }
                *slot = v;
            }
            None => {
                return Err(Error::Config {
                    line: None,
                    msg: format!("missing required key '{key}'"),
                })
            }
        }
    }

    let t_end = match raw.take("t_end") {
        None => {
            return Err(Error::Config {
                line: None,
                msg: "missing required key 't_end'".into(),
            })
        }
        Some((line, v)) => {
            let t: f64 = v.parse().map_err(|_| Error::Config {
                line: Some(line),
                msg: format!("key 't_end': expected a number, got {v:?}"),
            })?;
            if !(t > 0.0) {
                return Err(Error::Config {
                    line: Some(line),
                    msg: "key 't_end' must be positive".into(),
                });
            }
            t
        }
    };

    let mut extents = [0.0f64; 3];
    for (i, slot) in extents.iter_mut().enumerate() {
        let key = format!("l{}", i + 1);
        let v = raw.f64(&key, 1.0)?;
        if !(v > 0.0) {
            return Err(Error::Config {
                line: None,
                msg: format!("key '{key}' must be positive"),
            });
        }
        *slot = v;
    }

    let eos = match raw.take("eos") {
        None => {
            let kappa = raw.f64("kappa", 1.0)?;
            EquationOfState::Exponential { kappa }
        }
        Some((line, v)) => match v.as_str() {
            "exponential" => {
                let kappa = raw.f64("kappa", 1.0)?;
                if !(kappa > 0.0) {
                    return Err(Error::Config {
                        line: None,
                        msg: "key 'kappa' must be positive".into(),
                    });
                }
                EquationOfState::Exponential { kappa }
            }
            "polytropic" => {
                let gamma = raw.f64("gamma", 5.0 / 3.0)?;
                let c_v = raw.f64("c_v", 1.0)?;
                if !(gamma > 1.0) {
                    return Err(Error::Config {
                        line: None,
                        msg: "key 'gamma' must exceed 1".into(),
                    });
                }
                if !(c_v > 0.0) {
                    return Err(Error::Config {
                        line: None,
                        msg: "key 'c_v' must be positive".into(),
                    });
                }
                EquationOfState::Polytropic { gamma, c_v }
            }
            _ => {
                return Err(Error::Config {
                    line: Some(line),
                    msg: format!("key 'eos': expected exponential or polytropic, got {v:?}"),
                })
            }
        },
    };

    let background_c = raw.f64("background_c", 1.0)?;
    if background_c == 0.0 {
        return Err(Error::Config {
            line: None,
            msg: "key 'background_c' must be nonzero: the tangential-background case \
                  (c = 0) is outside the supported regime"
                .into(),
        });
    }

    let preset = match raw.take("preset") {
        None => PresetKind::Constant,
        Some((line, v)) => PresetKind::parse(&v).ok_or_else(|| Error::Config {
            line: Some(line),
            msg: format!(
                "key 'preset': expected constant, interior-bump, symmetric-perturbation \
                 or alfven-periodic, got {v:?}"
            ),
        })?,
    };
    let mut center = [0.5f64; 3];
    for (i, slot) in center.iter_mut().enumerate() {
        *slot = raw.f64(&format!("center{}", i + 1), 0.5)?;
    }
    if preset == PresetKind::SymmetricPerturbation {
        center[2] = 0.0;
    }
    let recipe = DatumRecipe {
        kind: preset,
        amplitude: raw.f64("amplitude", 0.01)?,
        width: raw.f64("width", 0.2)?,
        center,
        p_amplitude: raw.f64("p_amplitude", 0.0)?,
        mode: raw.u64_("mode", 1)? as u32,
    };

    let cfl = raw.f64("cfl", 0.5)?;
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::Config {
            line: None,
            msg: "key 'cfl' must lie in (0, 1]".into(),
        });
    }
    let epsilon = raw.f64("epsilon", 0.02)?;
    if !(epsilon >= 0.0) {
        return Err(Error::Config {
            line: None,
            msg: "key 'epsilon' must be non-negative".into(),
        });
    }

    let config = ScenarioConfig {
        domain,
        extents,
        counts,
        eos,
        background_c,
        recipe,
        cfl,
        epsilon,
        t_end,
        max_steps: raw.u64_("max_steps", 0)?,
        diag_every: raw.u64_("diag_every", 1)?,
        snapshot_every: raw.u64_("snapshot_every", 0)?,
        output_dir: PathBuf::from(match raw.take("output_dir") {
            Some((_, v)) => v,
            None => "out".to_string(),
        }),
        require_compat: raw.bool_("require_compat", true)?,
        seed: raw.u64_("seed", 0)?,
        serial_reductions: raw.bool_("serial_reductions", false)?,
        compat_factor: raw.f64("compat_factor", 10.0)?,
        h1_threshold_frac: raw.f64("h1_threshold_frac", 0.1)?,
        divfree_tol: raw.f64("divfree_tol", 0.0)?,
        persistence_factor: raw.f64("persistence_factor", 2.0)?,
        divh_growth_factor: raw.f64("divh_growth_factor", 10.0)?,
    };

    if let Some((key, (line, _))) = raw.entries.iter().next() {
        return Err(Error::Config {
            line: Some(*line),
            msg: format!("unknown key '{key}'"),
        });
    }

    // the grid constructor enforces the remaining geometric constraints
    config.grid()?;
    Ok(config)
}

/// Validates the run-sized grid requirement (checks are allowed on any size).
pub fn validate_run_size(config: &ScenarioConfig) -> Result<()> {
    for (i, &n) in config.counts.iter().enumerate() {
        if n < 16 && n != 1 {
            return Err(Error::Config {
                line: None,
                msg: format!(
                    "runs need n{} >= 16 (or exactly 1 for a degenerate axis), got {n}",
                    i + 1
                ),
            });
        }
    }
    Ok(())
}

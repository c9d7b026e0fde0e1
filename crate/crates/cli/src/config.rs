use std::cell::RefCell;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use strichartz::geometry::GridConfig;

/// Problems with the configuration itself; these exit with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub type CfgResult<T> = std::result::Result<T, ConfigError>;

fn bad<T>(msg: impl Into<String>) -> CfgResult<T> {
    Err(ConfigError(msg.into()))
}

pub const GRID_KEYS: &[(&str, &str)] = &[
    ("r_max", "radial cutoff for |z| (derived from f when unset)"),
    ("r_width", "panel width of the |z| rule"),
    ("t_max", "cutoff for |t| (derived from f when unset)"),
    ("t_width", "panel width of the t rule"),
    ("order", "Gauss-Legendre order per |z| and t panel"),
    ("lambda_max", "cutoff for |lambda| (derived from f when unset)"),
    ("lambda_panels", "panels per decade of the lambda rule"),
    ("lambda_order", "Gauss-Legendre order per lambda panel"),
    ("k_max", "hard cap on the Laguerre degree"),
    ("coeff_tol", "relative size that ends the k-sum"),
    ("w_k_max", "cap on k where w-integrals are numeric"),
    ("w_lambda_min", "smallest |lambda| with numeric w-integrals"),
    ("w_nodes_per_wave", "w nodes per oscillation"),
];

pub const COMMON_KEYS: &[(&str, &str)] = &[
    ("n", "dimension of H^n"),
    ("out", "output directory"),
    ("format", "report format: json or csv (csv adds tables and curves)"),
    ("tol", "tolerance for the command's main check"),
];

pub fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

/// Merged key-value parameters: flags over the `[command]` section over the
/// top of the config file. Every value read is recorded for the report header.
pub struct Params {
    values: BTreeMap<String, String>,
    /// `out` as given on the command line, which beats STRICHARTZ_OUT.
    out_flag: Option<String>,
    resolved: RefCell<BTreeMap<String, String>>,
}

impl Params {
    pub fn new(values: BTreeMap<String, String>, out_flag: Option<String>) -> Self {
        Self { values, out_flag, resolved: RefCell::new(BTreeMap::new()) }
    }

    /// Reads `path` and overlays `flags`. Keys outside `allowed` are an error.
    pub fn load(path: Option<&Path>, command: &str, flags: BTreeMap<String, String>, allowed: &[&str]) -> CfgResult<Self> {
        let mut values = BTreeMap::new();
        if let Some(p) = path {
            let ini = ini::Ini::load_from_file(p).map_err(|e| ConfigError(format!("cannot read config {}: {e}", p.display())))?;
            for (section, props) in ini.iter() {
                match section {
                    None => {}
                    Some(s) if s == command => {}
                    Some(_) => continue,
                }
                for (k, v) in props.iter() {
                    let k = normalize(k);
                    if !allowed.contains(&k.as_str()) {
                        return bad(format!("unknown key '{k}' in {} for '{command}'", p.display()));
                    }
                    // the command section wins over the top level
                    if section.is_some() || !values.contains_key(&k) {
                        values.insert(k, v.trim().to_string());
                    }
                }
            }
        }
        let out_flag = flags.get("out").cloned();
        values.extend(flags);
        Ok(Self::new(values, out_flag))
    }

    pub fn raw(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn note(&self, key: &str, v: String) {
        self.resolved.borrow_mut().insert(key.to_string(), v);
    }

    /// The values actually used, defaults included.
    pub fn header(&self) -> BTreeMap<String, String> {
        self.resolved.borrow().clone()
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        let v = self.values.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.note(key, v.clone());
        v
    }

    pub fn choice(&self, key: &str, default: &str, options: &[&str]) -> CfgResult<String> {
        let v = self.string(key, default);
        if options.contains(&v.as_str()) {
            Ok(v)
        } else {
            bad(format!("{key} must be one of {options:?}, got '{v}'"))
        }
    }

    pub fn opt_f64(&self, key: &str) -> CfgResult<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(s) => {
                let v: f64 = s.parse().map_err(|_| ConfigError(format!("{key} must be a number, got '{s}'")))?;
                if !v.is_finite() {
                    return bad(format!("{key} must be finite, got '{s}'"));
                }
                self.note(key, s.clone());
                Ok(Some(v))
            }
        }
    }

    pub fn f64(&self, key: &str, default: f64) -> CfgResult<f64> {
        match self.opt_f64(key)? {
            Some(v) => Ok(v),
            None => {
                self.note(key, default.to_string());
                Ok(default)
            }
        }
    }

    pub fn positive(&self, key: &str, default: f64) -> CfgResult<f64> {
        let v = self.f64(key, default)?;
        if v > 0.0 {
            Ok(v)
        } else {
            bad(format!("{key} must be positive, got {v}"))
        }
    }

    pub fn opt_usize(&self, key: &str) -> CfgResult<Option<usize>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(s) => {
                let v = s.parse().map_err(|_| ConfigError(format!("{key} must be a non-negative integer, got '{s}'")))?;
                self.note(key, s.clone());
                Ok(Some(v))
            }
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> CfgResult<usize> {
        match self.opt_usize(key)? {
            Some(v) => Ok(v),
            None => {
                self.note(key, default.to_string());
                Ok(default)
            }
        }
    }

    /// A count that must be at least `min`.
    pub fn count(&self, key: &str, default: usize, min: usize) -> CfgResult<usize> {
        let v = self.usize(key, default)?;
        if v < min {
            return bad(format!("{key} must be at least {min}, got {v}"));
        }
        Ok(v)
    }

    pub fn n(&self) -> CfgResult<usize> {
        self.count("n", 1, 1)
    }

    pub fn tol(&self, default: f64) -> CfgResult<f64> {
        let v = self.f64("tol", default)?;
        if !(v > 0.0 && v < 1.0) {
            return bad(format!("tol must lie in (0, 1), got {v}"));
        }
        Ok(v)
    }

    pub fn format(&self) -> CfgResult<String> {
        self.choice("format", "json", &["json", "csv"])
    }

    /// Flag, then STRICHARTZ_OUT, then the config file, then `strichartz-out`.
    pub fn out_dir(&self) -> PathBuf {
        if let Some(o) = &self.out_flag {
            return PathBuf::from(o);
        }
        if let Ok(o) = std::env::var("STRICHARTZ_OUT") {
            if !o.is_empty() {
                return PathBuf::from(o);
            }
        }
        PathBuf::from(self.values.get("out").cloned().unwrap_or_else(|| "strichartz-out".into()))
    }

    pub fn grid(&self) -> CfgResult<GridConfig> {
        let d = GridConfig::default();
        let opt_pos = |k: &str| -> CfgResult<Option<f64>> {
            match self.opt_f64(k)? {
                Some(v) if !(v > 0.0) => bad(format!("{k} must be positive, got {v}")),
                v => Ok(v),
            }
        };
        let g = GridConfig {
            r_max: opt_pos("r_max")?,
            r_width: self.positive("r_width", d.r_width)?,
            t_max: opt_pos("t_max")?,
            t_width: self.positive("t_width", d.t_width)?,
            order: self.count("order", d.order, 1)?,
            lambda_max: opt_pos("lambda_max")?,
            lambda_panels: self.count("lambda_panels", d.lambda_panels, 1)?,
            lambda_order: self.count("lambda_order", d.lambda_order, 1)?,
            k_max: self.count("k_max", d.k_max, 1)?,
            coeff_tol: self.positive("coeff_tol", d.coeff_tol)?,
            w_k_max: self.count("w_k_max", d.w_k_max, 1)?,
            w_lambda_min: {
                let v = self.f64("w_lambda_min", d.w_lambda_min)?;
                if v < 0.0 {
                    return bad(format!("w_lambda_min must be non-negative, got {v}"));
                }
                v
            },
            w_nodes_per_wave: self.count("w_nodes_per_wave", d.w_nodes_per_wave, 1)?,
        };
        if !(g.coeff_tol < 1.0) {
            return bad(format!("coeff_tol must lie in (0, 1), got {}", g.coeff_tol));
        }
        g.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(g)
    }
}

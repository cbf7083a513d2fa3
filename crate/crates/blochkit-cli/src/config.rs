//! Flat `key = value` configuration with optional `[section]` headers.
//!
//! Every key has a home section. A key may appear before any header or under
//! its own section, never under a different one.

use blochkit_core::greens::SumControl;
use blochkit_core::lattice::LatticeSpec;
use blochkit_core::permittivity::MaterialParams;
use blochkit_core::resonance_md::{OperatorModel, Projection, Quadrature};
use blochkit_core::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
}

impl ConfigError {
    fn parse(line: usize, col: usize, message: impl Into<String>) -> Self {
        ConfigError::Parse { line, col, message: message.into() }
    }

    fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation { key: key.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep1d,
    Gaps,
    Cascade,
    Poles,
    Field,
    Latsum,
    Resonances,
}

impl Mode {
    pub const ALL: [Mode; 7] =
        [Mode::Sweep1d, Mode::Gaps, Mode::Cascade, Mode::Poles, Mode::Field, Mode::Latsum, Mode::Resonances];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sweep1d => "sweep1d",
            Mode::Gaps => "gaps",
            Mode::Cascade => "cascade",
            Mode::Poles => "poles",
            Mode::Field => "field",
            Mode::Latsum => "latsum",
            Mode::Resonances => "resonances",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL.iter().copied().find(|m| m.name() == s).ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Real,
    Complex,
    /// Real criterion when ε is real on the axis, complex otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaRange {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl OmegaRange {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n).map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeOptions {
    pub delta: f64,
    pub side: blochkit_core::bandgap::Side,
    pub max_gaps: usize,
    pub envelope: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldOptions {
    pub omega: f64,
    pub branch: Branch,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaOptions {
    pub start: Vec<f64>,
    pub end: Option<Vec<f64>>,
    pub samples: usize,
}

impl KappaOptions {
    /// Points of the segment sampler (just `start` without an end point).
    pub fn points(&self) -> Vec<Vec<f64>> {
        match &self.end {
            None => vec![self.start.clone()],
            Some(end) => (0..self.samples)
                .map(|i| {
                    let t = i as f64 / (self.samples - 1) as f64;
                    self.start.iter().zip(end).map(|(a, b)| a + t * (b - a)).collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatsumOptions {
    pub k: Complex64,
    pub from: Vec<f64>,
    pub to: Vec<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryOptions {
    pub dim: usize,
    pub centers: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub cells: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    pub tol: f64,
    pub radius: f64,
    pub quad: Quadrature,
    pub model: OperatorModel,
    pub projection: Projection,
}

impl Numerics {
    pub fn sum_control(&self) -> SumControl {
        SumControl { radius: self.radius, tol: self.tol }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputOptions {
    pub dir: PathBuf,
    pub name: Option<String>,
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub material: MaterialParams<f64>,
    pub omega: OmegaRange,
    pub criterion: Criterion,
    pub cascade: CascadeOptions,
    pub field: FieldOptions,
    pub lattice: LatticeSpec,
    pub kappa: KappaOptions,
    pub latsum: LatsumOptions,
    pub geometry: GeometryOptions,
    pub search: SearchOptions,
    pub numerics: Numerics,
    pub output: OutputOptions,
    pub workers: usize,
}

impl RunConfig {
    /// Output file stem.
    pub fn stem(&self) -> String {
        self.output.name.clone().unwrap_or_else(|| self.mode.name().to_string())
    }

    /// Create the output directory and check that it accepts files.
    pub fn check_writable(&self) -> Result<(), ConfigError> {
        let dir = &self.output.dir;
        std::fs::create_dir_all(dir).map_err(|e| ConfigError::invalid("out_dir", e.to_string()))?;
        let probe = dir.join(format!(".{}.probe", self.stem()));
        std::fs::write(&probe, b"").map_err(|e| ConfigError::invalid("out_dir", e.to_string()))?;
        let _ = std::fs::remove_file(probe);
        Ok(())
    }

    /// Canonical `key = value` listing of every setting, in a fixed order.
    pub fn entries(&self) -> Vec<(String, String)> {
        let m = &self.material;
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let rows = |v: &[Vec<f64>]| v.iter().map(|r| list(r)).collect::<Vec<_>>().join("; ");
        let side = match self.cascade.side {
            blochkit_core::bandgap::Side::Below => "below",
            blochkit_core::bandgap::Side::Above => "above",
        };
        let e = vec![
            ("mode", self.mode.to_string()),
            ("eps0", format!("{:?}", m.eps0)),
            ("mu0", format!("{:?}", m.mu0)),
            ("alpha", format_complex(m.alpha)),
            ("beta", format!("{:?}", m.beta)),
            ("gamma", format!("{:?}", m.gamma)),
            ("omega_min", format!("{:?}", self.omega.min)),
            ("omega_max", format!("{:?}", self.omega.max)),
            ("omega_samples", self.omega.samples.to_string()),
            ("criterion", format!("{:?}", self.criterion).to_lowercase()),
            ("cascade_delta", format!("{:?}", self.cascade.delta)),
            ("side", side.to_string()),
            ("max_gaps", self.cascade.max_gaps.to_string()),
            ("envelope", list(&self.cascade.envelope)),
            ("field_omega", format!("{:?}", self.field.omega)),
            ("field_branch", format!("{:?}", self.field.branch).to_lowercase()),
            ("field_samples", self.field.samples.to_string()),
            ("generators", rows(&self.lattice.generators)),
            ("kappa", list(&self.kappa.start)),
            ("kappa_end", self.kappa.end.as_deref().map(list).unwrap_or_else(|| "none".into())),
            ("kappa_samples", self.kappa.samples.to_string()),
            ("latsum_k", format_complex(self.latsum.k)),
            ("latsum_from", list(&self.latsum.from)),
            ("latsum_to", list(&self.latsum.to)),
            ("latsum_samples", self.latsum.samples.to_string()),
            ("dim", self.geometry.dim.to_string()),
            ("centers", rows(&self.geometry.centers)),
            ("radii", list(&self.geometry.radii)),
            ("delta", format!("{:?}", self.geometry.delta)),
            ("search_re", list(&[self.search.re.0, self.search.re.1])),
            ("search_im", list(&[self.search.im.0, self.search.im.1])),
            ("search_cells", format!("{}, {}", self.search.cells.0, self.search.cells.1)),
            ("tol", format!("{:?}", self.numerics.tol)),
            ("radius", format!("{:?}", self.numerics.radius)),
            ("quad_radial", self.numerics.quad.radial.to_string()),
            ("quad_angular", self.numerics.quad.angular.to_string()),
            ("model", format!("{:?}", self.numerics.model).to_lowercase()),
            ("projection", format!("{:?}", self.numerics.projection).to_lowercase()),
            ("out_dir", self.output.dir.display().to_string()),
            ("name", self.stem()),
            ("svg", self.output.svg.to_string()),
            ("workers", self.workers.to_string()),
        ];
        e.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else if z.im < 0.0 {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

// (section, key) table; section "" is never a home
const KEYS: &[(&str, &str)] = &[
    ("run", "mode"),
    ("run", "workers"),
    ("material", "eps0"),
    ("material", "mu0"),
    ("material", "alpha"),
    ("material", "beta"),
    ("material", "gamma"),
    ("sweep", "omega_min"),
    ("sweep", "omega_max"),
    ("sweep", "omega_samples"),
    ("gaps", "criterion"),
    ("cascade", "cascade_delta"),
    ("cascade", "side"),
    ("cascade", "max_gaps"),
    ("cascade", "envelope"),
    ("field", "field_omega"),
    ("field", "field_branch"),
    ("field", "field_samples"),
    ("lattice", "generators"),
    ("kappa", "kappa"),
    ("kappa", "kappa_end"),
    ("kappa", "kappa_samples"),
    ("latsum", "latsum_k"),
    ("latsum", "latsum_from"),
    ("latsum", "latsum_to"),
    ("latsum", "latsum_samples"),
    ("geometry", "dim"),
    ("geometry", "centers"),
    ("geometry", "radii"),
    ("geometry", "delta"),
    ("search", "search_re"),
    ("search", "search_im"),
    ("search", "search_cells"),
    ("numerics", "tol"),
    ("numerics", "radius"),
    ("numerics", "quad_radial"),
    ("numerics", "quad_angular"),
    ("numerics", "model"),
    ("numerics", "projection"),
    ("output", "out_dir"),
    ("output", "name"),
    ("output", "svg"),
];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    col: usize,
}

struct Raw(BTreeMap<&'static str, Entry>);

impl Raw {
    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>, what: &str) -> Result<Option<T>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(e) => parse(&e.value)
                .map(Some)
                .ok_or_else(|| ConfigError::parse(e.line, e.col, format!("`{key}` expects {what}, found `{}`", e.value))),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key, parse_float, "a number")
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key, |s| s.parse::<usize>().ok(), "a non-negative integer")
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.get(key, parse_list, "a comma-separated list of numbers")
    }

    fn rows(&self, key: &str) -> Result<Option<Vec<Vec<f64>>>, ConfigError> {
        self.get(key, |s| s.split(';').map(parse_list).collect(), "rows separated by `;`")
    }

    fn complex(&self, key: &str) -> Result<Option<Complex64>, ConfigError> {
        self.get(key, parse_complex, "a complex number such as `1+0.5i`")
    }

    fn word<T>(&self, key: &str, options: &[(&str, T)]) -> Result<Option<T>, ConfigError>
    where
        T: Copy,
    {
        let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
        self.get(key, |s| options.iter().find(|(n, _)| *n == s).map(|(_, v)| *v), &format!("one of {}", names.join("|")))
    }
}

fn parse_float(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    s.split(',').map(|t| parse_float(t.trim())).collect()
}

/// `a`, `bi`, `a+bi`, `a-bi` (also `i` and `-i`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_float(&s).map(|x| Complex64::new(x, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_float(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_float(t)?,
    };
    Some(Complex64::new(re, im))
}

fn tokenize(text: &str) -> Result<Raw, ConfigError> {
    let mut section = String::new();
    let mut out: BTreeMap<&'static str, Entry> = BTreeMap::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::parse(line, indent + 1, "unterminated section header"))?
                .trim();
            if !KEYS.iter().any(|(s, _)| *s == name) {
                return Err(ConfigError::parse(line, indent + 2, format!("unknown section [{name}]")));
            }
            section = name.to_string();
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(ConfigError::parse(line, indent + 1, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        let value_part = &content[eq + 1..];
        let value = value_part.trim();
        let value_col = eq + 2 + (value_part.len() - value_part.trim_start().len());
        let Some(&(home, canon)) = KEYS.iter().find(|(_, k)| *k == key) else {
            return Err(ConfigError::parse(line, indent + 1, format!("unknown key `{key}`")));
        };
        if !section.is_empty() && section != home {
            return Err(ConfigError::parse(line, indent + 1, format!("key `{key}` belongs in [{home}], not [{section}]")));
        }
        if value.is_empty() {
            return Err(ConfigError::parse(line, value_col, format!("missing value for `{key}`")));
        }
        if out.contains_key(canon) {
            return Err(ConfigError::parse(line, indent + 1, format!("duplicate key `{key}`")));
        }
        out.insert(canon, Entry { value: value.to_string(), line, col: value_col });
    }
    Ok(Raw(out))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Parse and validate a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw = tokenize(text)?;
    use blochkit_core::bandgap::Side;

    let mode = raw
        .get("mode", |s| s.parse::<Mode>().ok(), "a mode name")?
        .unwrap_or(Mode::Sweep1d);
    let workers = raw.count("workers")?.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(ConfigError::invalid("workers", "must be at least 1"));
    }

    let eps0 = raw.float("eps0")?.unwrap_or(1.0);
    let mu0 = raw.float("mu0")?.unwrap_or(1.0);
    // the lattice-sum mode never touches the material
    let required = |key: &str| ConfigError::invalid(key, "required");
    let optional = mode == Mode::Latsum;
    let alpha = match raw.complex("alpha")? {
        Some(a) => a,
        None if optional => Complex64::new(0.0, 0.0),
        None => return Err(required("alpha")),
    };
    let beta = match raw.float("beta")? {
        Some(b) => b,
        None if optional => 0.0,
        None => return Err(required("beta")),
    };
    let gamma = match raw.float("gamma")? {
        Some(g) => g,
        None if optional => 0.0,
        None => return Err(required("gamma")),
    };
    for (k, v, ok) in [
        ("eps0", eps0, eps0 > 0.0),
        ("mu0", mu0, mu0 > 0.0),
        ("beta", beta, beta >= 0.0),
        ("gamma", gamma, gamma >= 0.0),
    ] {
        if !ok {
            return Err(ConfigError::invalid(k, format!("{v} is out of range")));
        }
    }
    let material = MaterialParams { eps0, mu0, alpha, beta, gamma };

    let omega = OmegaRange {
        min: raw.float("omega_min")?.unwrap_or(0.0),
        max: raw.float("omega_max")?.unwrap_or(10.0),
        samples: raw.count("omega_samples")?.unwrap_or(2001),
    };
    if omega.min < 0.0 {
        return Err(ConfigError::invalid("omega_min", "must be non-negative"));
    }
    if omega.max <= omega.min {
        return Err(ConfigError::invalid("omega_max", "must exceed omega_min"));
    }
    if omega.samples < 2 {
        return Err(ConfigError::invalid("omega_samples", "need at least 2 samples"));
    }

    let criterion = raw
        .word("criterion", &[("real", Criterion::Real), ("complex", Criterion::Complex), ("auto", Criterion::Auto)])?
        .unwrap_or(Criterion::Auto);

    let cascade = CascadeOptions {
        delta: raw.float("cascade_delta")?.unwrap_or(0.1),
        side: raw.word("side", &[("below", Side::Below), ("above", Side::Above)])?.unwrap_or(Side::Below),
        max_gaps: raw.count("max_gaps")?.unwrap_or(10),
        envelope: raw.list("envelope")?.unwrap_or_default(),
    };
    if cascade.delta <= 0.0 {
        return Err(ConfigError::invalid("cascade_delta", "must be positive"));
    }
    if cascade.max_gaps == 0 {
        return Err(ConfigError::invalid("max_gaps", "must be at least 1"));
    }
    if cascade.envelope.iter().any(|d| *d <= 0.0) || cascade.envelope.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ConfigError::invalid("envelope", "must be positive and strictly decreasing"));
    }

    let field = FieldOptions {
        omega: raw.float("field_omega")?.unwrap_or(1.0),
        branch: raw.word("field_branch", &[("plus", Branch::Plus), ("minus", Branch::Minus)])?.unwrap_or(Branch::Plus),
        samples: raw.count("field_samples")?.unwrap_or(201),
    };
    if field.omega < 0.0 {
        return Err(ConfigError::invalid("field_omega", "must be non-negative"));
    }
    if field.samples < 2 {
        return Err(ConfigError::invalid("field_samples", "need at least 2 samples"));
    }

    let generators = raw.rows("generators")?.unwrap_or_else(|| vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let lattice = LatticeSpec::new(generators).map_err(|e| ConfigError::invalid("generators", e.to_string()))?;
    let d = lattice.d;

    let mut start = raw.list("kappa")?.unwrap_or_else(|| vec![0.0; d]);
    if start.len() == 1 && d > 1 {
        start.resize(d, 0.0);
    }
    if start.len() != d {
        return Err(ConfigError::invalid("kappa", format!("expected {d} components")));
    }
    let end = raw.list("kappa_end")?;
    if end.as_ref().is_some_and(|e| e.len() != d) {
        return Err(ConfigError::invalid("kappa_end", format!("expected {d} components")));
    }
    let kappa_samples = raw.count("kappa_samples")?.unwrap_or(if end.is_some() { 11 } else { 1 });
    if kappa_samples == 0 || (end.is_some() && kappa_samples < 2) {
        return Err(ConfigError::invalid("kappa_samples", "a segment needs at least 2 samples"));
    }
    let kappa = KappaOptions { start, end, samples: kappa_samples };

    let zero = vec![0.0; d];
    let mut far = zero.clone();
    far[0] = 0.5;
    let latsum = LatsumOptions {
        k: raw.complex("latsum_k")?.unwrap_or(Complex64::new(1.0, 0.5)),
        from: raw.list("latsum_from")?.unwrap_or_else(|| {
            let mut v = zero.clone();
            v[0] = 0.05;
            v
        }),
        to: raw.list("latsum_to")?.unwrap_or(far),
        samples: raw.count("latsum_samples")?.unwrap_or(21),
    };
    if latsum.k.im < 0.0 {
        return Err(ConfigError::invalid("latsum_k", "Im k must be non-negative"));
    }
    if latsum.from.len() != d {
        return Err(ConfigError::invalid("latsum_from", format!("expected {d} components")));
    }
    if latsum.to.len() != d {
        return Err(ConfigError::invalid("latsum_to", format!("expected {d} components")));
    }
    if latsum.samples < 2 {
        return Err(ConfigError::invalid("latsum_samples", "need at least 2 samples"));
    }

    let dim = raw.count("dim")?.unwrap_or(d);
    if dim != 2 && dim != 3 {
        return Err(ConfigError::invalid("dim", "must be 2 or 3"));
    }
    let centers = raw.rows("centers")?.unwrap_or_else(|| vec![vec![0.5; dim]]);
    let radii = raw.list("radii")?.unwrap_or_else(|| vec![0.1]);
    let gdelta = raw.float("delta")?.unwrap_or(0.05);
    if centers.iter().any(|c| c.len() != dim) {
        return Err(ConfigError::invalid("centers", format!("each center needs {dim} coordinates")));
    }
    if radii.len() != centers.len() {
        return Err(ConfigError::invalid("radii", "one radius per center"));
    }
    if radii.iter().any(|r| *r <= 0.0) {
        return Err(ConfigError::invalid("radii", "must be positive"));
    }
    if gdelta <= 0.0 {
        return Err(ConfigError::invalid("delta", "must be positive"));
    }
    let geometry = GeometryOptions { dim, centers, radii, delta: gdelta };

    let pair = |key: &str, default: (f64, f64)| -> Result<(f64, f64), ConfigError> {
        match raw.list(key)? {
            None => Ok(default),
            Some(v) if v.len() == 2 && v[0] < v[1] => Ok((v[0], v[1])),
            Some(_) => Err(ConfigError::invalid(key, "expected `lo, hi` with lo < hi")),
        }
    };
    let cells = match raw.list("search_cells")? {
        None => (8, 8),
        Some(v) if v.len() == 2 && v.iter().all(|x| *x >= 1.0 && x.fract() == 0.0) => (v[0] as usize, v[1] as usize),
        Some(_) => return Err(ConfigError::invalid("search_cells", "expected two positive integers")),
    };
    let search = SearchOptions { re: pair("search_re", (0.5, 1.5))?, im: pair("search_im", (-0.5, 0.0))?, cells };

    let numerics = Numerics {
        tol: raw.float("tol")?.unwrap_or(1e-10),
        radius: raw.float("radius")?.unwrap_or(3.0),
        quad: Quadrature {
            radial: raw.count("quad_radial")?.unwrap_or(8),
            angular: raw.count("quad_angular")?.unwrap_or(16),
        },
        model: raw
            .word("model", &[("expansion", OperatorModel::Expansion), ("full", OperatorModel::Full)])?
            .unwrap_or(if dim == 2 { OperatorModel::Expansion } else { OperatorModel::Full }),
        projection: raw
            .word("projection", &[("constant", Projection::Constant), ("eigenvector", Projection::Eigenvector)])?
            .unwrap_or(Projection::Constant),
    };
    if numerics.tol <= 0.0 {
        return Err(ConfigError::invalid("tol", "must be positive"));
    }
    if numerics.radius <= 0.0 {
        return Err(ConfigError::invalid("radius", "must be positive"));
    }
    if numerics.quad.radial == 0 {
        return Err(ConfigError::invalid("quad_radial", "must be at least 1"));
    }
    if numerics.quad.angular < 2 {
        return Err(ConfigError::invalid("quad_angular", "must be at least 2"));
    }

    let output = OutputOptions {
        dir: raw.get("out_dir", |s| Some(PathBuf::from(s)), "a path")?.unwrap_or_else(|| PathBuf::from(".")),
        name: raw.get("name", |s| valid_name(s).then(|| s.to_string()), "a file stem of [A-Za-z0-9_-]")?,
        svg: raw.word("svg", &[("true", true), ("false", false)])?.unwrap_or(false),
    };

    Ok(RunConfig {
        mode,
        material,
        omega,
        criterion,
        cascade,
        field,
        lattice,
        kappa,
        latsum,
        geometry,
        search,
        numerics,
        output,
        workers,
    })
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

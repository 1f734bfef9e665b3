//! Optional TOML configuration with sections mirroring the library modules;
//! command-line flags override file values.

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub dist: DistSection,
    #[serde(default)]
    pub quantizer: QuantizerSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistSection {
    pub kind: Option<String>,
    pub sigma: Option<f64>,
    pub custom_density: Option<String>,
    pub allow_sigma_out_of_range: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizerSection {
    pub trunc: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub j: Option<String>,
    pub phi: Option<String>,
    pub times: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<String>,
    pub format: Option<String>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Parse "lo:hi:steps" into a sample vector (endpoints included).
pub fn parse_grid_spec(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid spec '{spec}' must be lo:hi:steps"));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| format!("bad grid bound '{}'", parts[0]))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| format!("bad grid bound '{}'", parts[1]))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| format!("bad grid step count '{}'", parts[2]))?;
    if steps == 0 {
        return Err("grid needs at least one point".into());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

pub fn parse_f64_list(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{t}' in list"))
        })
        .collect()
}

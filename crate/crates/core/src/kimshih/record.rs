use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::units::LengthUnit;

/// Published Kim–Shih inputs as a record file.
pub const KIM_SHIH_RECORD: &str = "\
# Kim & Shih (1999) ghost-slit coincidence data
slit_width = 0.16
slit_width_unit = mm
ratio_ns = 1.25
ratio_s = 2.15
eta = 1
source = Kim & Shih 1999: slit width 0.16 mm, dP2 non-slit/slit = 1.25/2.15
";

/// Slit width, non-slit/slit momentum-spread ratio and `eta = 1 + gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    slit_width: f64,
    ratio_ns_over_s: f64,
    eta: f64,
    length_unit: LengthUnit,
    source: String,
}

impl ExperimentRecord {
    pub fn new(
        slit_width: f64,
        ratio_ns_over_s: f64,
        eta: f64,
        length_unit: LengthUnit,
        source: impl Into<String>,
    ) -> Result<Self> {
        if !(slit_width > 0.0 && slit_width.is_finite()) {
            return Err(Error::Parse(format!("slit_width must be positive, got {slit_width}")));
        }
        if !(ratio_ns_over_s > 0.0 && ratio_ns_over_s.is_finite()) {
            return Err(Error::Parse(format!(
                "ratio_ns/ratio_s must be positive, got {ratio_ns_over_s}"
            )));
        }
        if !(eta >= 1.0 && eta.is_finite()) {
            return Err(Error::Parse(format!("eta must be >= 1, got {eta}")));
        }
        Ok(ExperimentRecord {
            slit_width,
            ratio_ns_over_s,
            eta,
            length_unit,
            source: source.into(),
        })
    }

    /// The published record: 0.16 mm slit, ratio 1.25/2.15, `eta = 1`.
    pub fn kim_shih() -> Self {
        parse_experiment(KIM_SHIH_RECORD).expect("built-in record parses")
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn ratio_ns_over_s(&self) -> f64 {
        self.ratio_ns_over_s
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.eta - 1.0
    }

    pub fn length_unit(&self) -> LengthUnit {
        self.length_unit
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn with_ratio(&self, ratio: f64) -> Result<Self> {
        Self::new(self.slit_width, ratio, self.eta, self.length_unit, self.source.clone())
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(
            self.slit_width,
            self.ratio_ns_over_s,
            eta,
            self.length_unit,
            self.source.clone(),
        )
    }

    /// Same record with the slit width expressed in `unit`.
    pub fn in_unit(&self, unit: LengthUnit) -> Self {
        ExperimentRecord {
            slit_width: self.length_unit.convert(self.slit_width, unit),
            length_unit: unit,
            ..self.clone()
        }
    }
}

const KEYS: [&str; 6] = ["slit_width", "slit_width_unit", "ratio_ns", "ratio_s", "eta", "source"];

fn number(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    map.get(key)
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| Error::Parse(format!("{key}: `{v}` is not a number")))
        })
        .transpose()
}

fn required(map: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    number(map, key)?.ok_or_else(|| Error::Parse(format!("{key} required")))
}

/// Parses the `key = value` record format (`#` starts a comment).
pub fn parse_experiment(text: &str) -> Result<ExperimentRecord> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(Error::Parse(format!("line {}: unknown key `{k}`", lineno + 1)));
        }
        // inline comments after numeric values
        let v = if k == "source" {
            v
        } else {
            v.split('#').next().unwrap_or("").trim()
        };
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Parse(format!("line {}: duplicate key `{k}`", lineno + 1)));
        }
    }

    let slit_width = required(&map, "slit_width")?;
    let ratio_ns = required(&map, "ratio_ns")?;
    let ratio_s = required(&map, "ratio_s")?;
    if !(slit_width > 0.0) {
        return Err(Error::Parse(format!("slit_width must be positive, got {slit_width}")));
    }
    if !(ratio_ns > 0.0) {
        return Err(Error::Parse(format!("ratio_ns must be positive, got {ratio_ns}")));
    }
    if !(ratio_s > 0.0) {
        return Err(Error::Parse(format!("ratio_s must be positive, got {ratio_s}")));
    }
    let unit = match map.get("slit_width_unit") {
        Some(u) => u
            .parse::<LengthUnit>()
            .map_err(|_| Error::Parse(format!("slit_width_unit: unknown unit `{u}`")))?,
        None => LengthUnit::Millimeter,
    };
    let eta = number(&map, "eta")?.unwrap_or(1.0);
    let source = map.get("source").cloned().unwrap_or_default();
    ExperimentRecord::new(slit_width, ratio_ns / ratio_s, eta, unit, source)
}

/// Reads and parses a record file.
pub fn load_experiment(path: impl AsRef<Path>) -> Result<ExperimentRecord> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_experiment(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_record() {
        let r = ExperimentRecord::kim_shih();
        assert_eq!(r.slit_width(), 0.16);
        assert_eq!(r.ratio_ns_over_s(), 1.25 / 2.15);
        assert_eq!(r.eta(), 1.0);
        assert_eq!(r.length_unit(), LengthUnit::Millimeter);
        assert!(r.source().contains("Kim"));
    }

    #[test]
    fn missing_ratio_s() {
        let err = parse_experiment("slit_width = 0.16\nratio_ns = 1.25\n").unwrap_err();
        assert_eq!(err.to_string(), "parse error: ratio_s required");
    }

    #[test]
    fn negative_slit() {
        let err = parse_experiment("slit_width = -1\nratio_ns = 1\nratio_s = 2\n").unwrap_err();
        assert!(err.to_string().contains("slit_width"));
    }

    #[test]
    fn eta_defaults_and_validates() {
        let r = parse_experiment("slit_width=0.2\nratio_ns=1\nratio_s=2").unwrap();
        assert_eq!(r.eta(), 1.0);
        assert!(parse_experiment("slit_width=0.2\nratio_ns=1\nratio_s=2\neta=0.5").is_err());
    }

    #[test]
    fn rejects_unknown_units_keys_and_duplicates() {
        let base = "slit_width=0.2\nratio_ns=1\nratio_s=2\n";
        assert!(parse_experiment(&format!("{base}slit_width_unit=parsec"))
            .unwrap_err()
            .to_string()
            .contains("slit_width_unit"));
        assert!(parse_experiment(&format!("{base}colour=red"))
            .unwrap_err()
            .to_string()
            .contains("colour"));
        assert!(parse_experiment(&format!("{base}ratio_s=3"))
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
        assert!(parse_experiment(&format!("{base}eta=abc"))
            .unwrap_err()
            .to_string()
            .contains("eta"));
    }

    #[test]
    fn comments_and_units() {
        let r =
            parse_experiment("# header\nslit_width = 160 # microns\nslit_width_unit = um\nratio_ns = 1\nratio_s = 2\n")
                .unwrap();
        assert_eq!(r.slit_width(), 160.0);
        let mm = r.in_unit(LengthUnit::Millimeter);
        assert!((mm.slit_width() - 0.16).abs() < 1e-15);
    }
}

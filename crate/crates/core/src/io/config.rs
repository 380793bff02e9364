//! Sectioned `key = value` run configuration.
//!
//! ```text
//! # comment
//! [geometry]
//! pole_count = 8
//! slot_count = 48
//! airgap_radius = 0.05
//! rotor_radius = 0.0495
//! axial_length = 0.1
//! slot_bottom_radius = 0.07
//!
//! [skew]
//! style = step
//! segments = 3
//! theta_skew = 7.5 deg
//!
//! [grid]
//! time_samples = 128
//! angle_samples = 384
//!
//! [synthesis]
//! harmonic = radial 4 1 1.0 0
//! harmonic = tangential 4 1 0.1 0 deg
//! ```
//!
//! Values are SI. Angles take an optional `deg` or `rad` suffix and default to
//! radians. `harmonic` is the only repeatable key. Exactly one of the
//! `[synthesis]` section or `input.field_map` must be present.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harmonics::ToothSpectrumMode;
use crate::model::{
    FieldComponent, MachineGeometry, SkewConfiguration, SkewStyle, ToothPath,
    DEFAULT_CONTINUOUS_RESOLUTION,
};
use crate::synth::FieldHarmonic;

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

/// Parsed but not yet interpreted configuration text.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDocument {
    sections: Vec<Section>,
}

const SCHEMA: &[(&str, &[&str])] = &[
    (
        "geometry",
        &[
            "pole_count",
            "slot_count",
            "airgap_radius",
            "rotor_radius",
            "axial_length",
            "rotor_diameter",
            "slot_bottom_radius",
        ],
    ),
    ("skew", &["style", "segments", "theta_skew", "continuous_resolution"]),
    ("grid", &["time_samples", "angle_samples", "slices"]),
    ("synthesis", &["harmonic"]),
    ("input", &["field_map", "slot_paths", "interpolate"]),
    (
        "evaluation",
        &[
            "include_bz",
            "tooth_path",
            "spectrum_mode",
            "spectrum_component",
            "report_orders",
            "output_dir",
        ],
    ),
];

fn key_path(section: &str, key: &str) -> String {
    format!("{section}.{key}")
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.split('\n').enumerate() {
            let line = i + 1;
            if raw.contains('\r') {
                return Err(Error::config(
                    format!("line {line}"),
                    "carriage return found; use LF line endings",
                ));
            }
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::config(format!("line {line}"), "unterminated section header"))?
                    .trim()
                    .to_string();
                if !SCHEMA.iter().any(|(s, _)| *s == name) {
                    return Err(Error::config(name, format!("unknown section (line {line})")));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(Error::config(name, format!("section repeated (line {line})")));
                }
                sections.push(Section {
                    name,
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {line}"), "expected `key = value`"))?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            let section = sections
                .last_mut()
                .ok_or_else(|| Error::config(&key, format!("key outside any section (line {line})")))?;
            push_entry(section, key, value, line)?;
        }
        Ok(ConfigDocument { sections })
    }

    fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.section(section)?.entries.iter().find(|e| e.key == key)
    }
}

fn push_entry(section: &mut Section, key: String, value: String, line: usize) -> Result<()> {
    let allowed = SCHEMA
        .iter()
        .find(|(s, _)| *s == section.name)
        .map(|(_, keys)| *keys)
        .unwrap_or(&[]);
    let path = key_path(&section.name, &key);
    if !allowed.contains(&key.as_str()) {
        return Err(Error::config(path, format!("unknown key (line {line})")));
    }
    if key != "harmonic" && section.entries.iter().any(|e| e.key == key) {
        return Err(Error::config(path, format!("key repeated (line {line})")));
    }
    section.entries.push(Entry { key, value, line });
    Ok(())
}

/// Applies `section.key=value` overrides. Existing keys are replaced; new keys
/// (and every `synthesis.harmonic`) are appended.
pub fn apply_overrides(doc: &mut ConfigDocument, overrides: &[String]) -> Result<()> {
    for ov in overrides {
        let (path, value) = ov
            .split_once('=')
            .ok_or_else(|| Error::config(ov, "override must look like section.key=value"))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::config(path, "override key must be section.key"))?;
        let (section, key, value) = (section.trim(), key.trim(), value.trim());
        if !SCHEMA.iter().any(|(s, _)| *s == section) {
            return Err(Error::config(section, "unknown section in override"));
        }
        if !doc.sections.iter().any(|s| s.name == section) {
            doc.sections.push(Section {
                name: section.to_string(),
                line: 0,
                entries: Vec::new(),
            });
        }
        let sec = doc.sections.iter_mut().find(|s| s.name == section).unwrap();
        match sec.entries.iter_mut().find(|e| e.key == key && key != "harmonic") {
            Some(e) => {
                e.value = value.to_string();
                e.line = 0;
            }
            None => push_entry(sec, key.to_string(), value.to_string(), 0)?,
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Typed configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridSpec {
    pub time_samples: Option<usize>,
    pub angle_samples: Option<usize>,
    pub slices: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldInput {
    Synthesis(Vec<FieldHarmonic>),
    FieldMap(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub include_bz: bool,
    pub tooth_path: ToothPath,
    pub spectrum_mode: ToothSpectrumMode,
    pub spectrum_component: FieldComponent,
    /// Mechanical torque orders reported in summaries.
    pub report_orders: Vec<u32>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub geometry: MachineGeometry,
    pub skew: SkewConfiguration,
    pub grid: GridSpec,
    pub input: FieldInput,
    pub slot_paths: Option<PathBuf>,
    pub interpolate: bool,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Directory that relative paths are resolved against.
    pub base_dir: Option<PathBuf>,
    /// Check that referenced files exist while parsing.
    pub eager: bool,
    /// `section.key=value` overrides applied after the text is parsed.
    pub overrides: Vec<String>,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &ParseOptions::default())
}

pub fn parse_config_with(text: &str, opts: &ParseOptions) -> Result<RunConfig> {
    let mut doc = ConfigDocument::parse(text)?;
    apply_overrides(&mut doc, &opts.overrides)?;
    build(&doc, opts)
}

fn required<'a>(doc: &'a ConfigDocument, section: &str, key: &str) -> Result<&'a Entry> {
    doc.get(section, key)
        .ok_or_else(|| Error::config(key_path(section, key), "missing mandatory key"))
}

fn at(entry: &Entry) -> String {
    if entry.line == 0 {
        "(override)".to_string()
    } else {
        format!("(line {})", entry.line)
    }
}

fn parse_uint(section: &str, e: &Entry) -> Result<u64> {
    e.value.parse::<u64>().map_err(|_| {
        Error::config(
            key_path(section, &e.key),
            format!("expected a non-negative integer, found `{}` {}", e.value, at(e)),
        )
    })
}

fn parse_real(section: &str, e: &Entry) -> Result<f64> {
    match e.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::config(
            key_path(section, &e.key),
            format!("expected a finite number in SI units, found `{}` {}", e.value, at(e)),
        )),
    }
}

fn parse_bool(section: &str, e: &Entry) -> Result<bool> {
    match e.value.as_str() {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        other => Err(Error::config(
            key_path(section, &e.key),
            format!("expected true or false, found `{other}` {}", at(e)),
        )),
    }
}

/// Parses `1.5`, `1.5 rad`, `7.5deg` or `7.5 deg` into radians.
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim();
    let split = t
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{t}` is not a number with an optional deg/rad suffix"))?;
    if !value.is_finite() {
        return Err(format!("`{t}` is not finite"));
    }
    match unit.trim() {
        "" | "rad" => Ok(value),
        "deg" => Ok(value * PI / 180.0),
        other => Err(format!("unknown angle unit `{other}` (use deg or rad)")),
    }
}

fn angle_entry(section: &str, e: &Entry) -> Result<f64> {
    parse_angle(&e.value).map_err(|m| Error::config(key_path(section, &e.key), format!("{m} {}", at(e))))
}

fn parse_harmonic(e: &Entry) -> Result<FieldHarmonic> {
    let err = |m: String| Error::config("synthesis.harmonic", format!("{m} {}", at(e)));
    let tokens: Vec<&str> = e.value.split_whitespace().collect();
    if tokens.len() < 5 {
        return Err(err(format!(
            "expected `component m n amplitude phase[ deg|rad]`, found `{}`",
            e.value
        )));
    }
    let component: FieldComponent = tokens[0].parse().map_err(|x: Error| err(x.to_string()))?;
    let m: i64 = tokens[1].parse().map_err(|_| err(format!("spatial order `{}` is not an integer", tokens[1])))?;
    let n: i64 = tokens[2].parse().map_err(|_| err(format!("temporal order `{}` is not an integer", tokens[2])))?;
    let amplitude: f64 = tokens[3]
        .parse()
        .ok()
        .filter(|a: &f64| a.is_finite() && *a >= 0.0)
        .ok_or_else(|| err(format!("amplitude `{}` must be a non-negative number", tokens[3])))?;
    let phase = parse_angle(&tokens[4..].join(" ")).map_err(err)?;
    Ok(FieldHarmonic::new(component, m, n, amplitude, phase))
}

fn resolve(opts: &ParseOptions, raw: &str) -> PathBuf {
    let p = Path::new(raw);
    match (&opts.base_dir, p.is_relative()) {
        (Some(base), true) => base.join(p),
        _ => p.to_path_buf(),
    }
}

fn build(doc: &ConfigDocument, opts: &ParseOptions) -> Result<RunConfig> {
    // geometry
    let g = "geometry";
    let count = |key: &str| -> Result<u32> {
        let e = required(doc, g, key)?;
        let v = parse_uint(g, e)?;
        u32::try_from(v).map_err(|_| Error::config(key_path(g, key), "value too large"))
    };
    let length = |key: &str| -> Result<f64> { parse_real(g, required(doc, g, key)?) };
    let rotor_radius = length("rotor_radius")?;
    let geometry = MachineGeometry {
        pole_count: count("pole_count")?,
        slot_count: count("slot_count")?,
        airgap_radius: length("airgap_radius")?,
        rotor_radius,
        axial_length: length("axial_length")?,
        rotor_diameter: match doc.get(g, "rotor_diameter") {
            Some(e) => parse_real(g, e)?,
            None => 2.0 * rotor_radius,
        },
        slot_bottom_radius: length("slot_bottom_radius")?,
    };
    let report = geometry.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::config(key_path(g, v.field), v.message.clone()));
    }

    // skew
    let s = "skew";
    let skew = match doc.section(s) {
        None => SkewConfiguration::none(),
        Some(_) => {
            let style_e = required(doc, s, "style")?;
            let style: SkewStyle = style_e
                .value
                .parse()
                .map_err(|x: Error| Error::config("skew.style", format!("{x} {}", at(style_e))))?;
            let segment_count = match doc.get(s, "segments") {
                Some(e) => u32::try_from(parse_uint(s, e)?)
                    .map_err(|_| Error::config("skew.segments", "value too large"))?,
                None => 1,
            };
            let total_angle = match doc.get(s, "theta_skew") {
                Some(e) => angle_entry(s, e)?,
                None => 0.0,
            };
            let continuous_resolution = match doc.get(s, "continuous_resolution") {
                Some(e) => u32::try_from(parse_uint(s, e)?)
                    .map_err(|_| Error::config("skew.continuous_resolution", "value too large"))?,
                None => DEFAULT_CONTINUOUS_RESOLUTION,
            };
            let cfg = SkewConfiguration {
                style,
                segment_count,
                total_angle,
                continuous_resolution,
            };
            let report = cfg.validate();
            if let Some(v) = report.violations.first() {
                let key = match v.field {
                    "segment_count" => "segments",
                    "total_angle" => "theta_skew",
                    other => other,
                };
                return Err(Error::config(key_path(s, key), v.message.clone()));
            }
            cfg
        }
    };

    // grid
    let gr = "grid";
    let opt_usize = |key: &str| -> Result<Option<usize>> {
        doc.get(gr, key)
            .map(|e| parse_uint(gr, e).map(|v| v as usize))
            .transpose()
    };
    let grid = GridSpec {
        time_samples: opt_usize("time_samples")?,
        angle_samples: opt_usize("angle_samples")?,
        slices: opt_usize("slices")?,
    };

    // input
    let field_map = doc.get("input", "field_map");
    let synthesis = doc.section("synthesis");
    let input = match (synthesis, field_map) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "input.field_map",
                "a [synthesis] section and input.field_map are mutually exclusive",
            ))
        }
        (None, None) => {
            return Err(Error::config(
                "synthesis",
                "missing field source: give a [synthesis] section or input.field_map",
            ))
        }
        (Some(sec), None) => {
            let harmonics = sec
                .entries
                .iter()
                .map(parse_harmonic)
                .collect::<Result<Vec<_>>>()?;
            for key in ["time_samples", "angle_samples"] {
                if doc.get(gr, key).is_none() {
                    return Err(Error::config(key_path(gr, key), "missing mandatory key for synthesis"));
                }
            }
            FieldInput::Synthesis(harmonics)
        }
        (None, Some(e)) => FieldInput::FieldMap(resolve(opts, &e.value)),
    };
    let slot_paths = doc.get("input", "slot_paths").map(|e| resolve(opts, &e.value));
    let interpolate = match doc.get("input", "interpolate") {
        Some(e) => parse_bool("input", e)?,
        None => false,
    };
    if opts.eager {
        if let FieldInput::FieldMap(p) = &input {
            if !p.exists() {
                return Err(Error::config("input.field_map", format!("file {} does not exist", p.display())));
            }
        }
        if let Some(p) = &slot_paths {
            if !p.exists() {
                return Err(Error::config("input.slot_paths", format!("file {} does not exist", p.display())));
            }
        }
    }

    // evaluation
    let ev = "evaluation";
    let parse_enum = |key: &str| -> Option<(&Entry, String)> { doc.get(ev, key).map(|e| (e, key_path(ev, key))) };
    let include_bz = match doc.get(ev, "include_bz") {
        Some(e) => parse_bool(ev, e)?,
        None => false,
    };
    let tooth_path = match parse_enum("tooth_path") {
        Some((e, path)) => e.value.parse().map_err(|x: Error| Error::config(path, format!("{x} {}", at(e))))?,
        None => ToothPath::OneSection,
    };
    let spectrum_mode = match parse_enum("spectrum_mode") {
        Some((e, path)) => e.value.parse().map_err(|x: Error| Error::config(path, format!("{x} {}", at(e))))?,
        None => ToothSpectrumMode::SpaceTime,
    };
    let spectrum_component = match parse_enum("spectrum_component") {
        Some((e, path)) => e.value.parse().map_err(|x: Error| Error::config(path, format!("{x} {}", at(e))))?,
        None => FieldComponent::Radial,
    };
    let report_orders = match doc.get(ev, "report_orders") {
        Some(e) => {
            let mut set = BTreeSet::new();
            for tok in e.value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let v: u32 = tok.parse().map_err(|_| {
                    Error::config("evaluation.report_orders", format!("`{tok}` is not a non-negative integer {}", at(e)))
                })?;
                set.insert(v);
            }
            set.into_iter().collect()
        }
        None => vec![geometry.slot_count, 2 * geometry.slot_count],
    };
    let output_dir = doc.get(ev, "output_dir").map(|e| resolve(opts, &e.value));

    Ok(RunConfig {
        geometry,
        skew,
        grid,
        input,
        slot_paths,
        interpolate,
        evaluation: Evaluation {
            include_bz,
            tooth_path,
            spectrum_mode,
            spectrum_component,
            report_orders,
            output_dir,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[geometry]
pole_count = 8
slot_count = 48
airgap_radius = 0.05
rotor_radius = 0.0495
axial_length = 0.1
slot_bottom_radius = 0.07

[grid]
time_samples = 64
angle_samples = 192

[synthesis]
harmonic = radial 4 1 1.0 0
";

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.geometry.pole_count, 8);
        assert!((cfg.geometry.rotor_diameter - 0.099).abs() < 1e-15);
        assert_eq!(cfg.skew, SkewConfiguration::none());
        assert!(matches!(cfg.input, FieldInput::Synthesis(ref h) if h.len() == 1));
        assert_eq!(cfg.evaluation.report_orders, vec![48, 96]);
    }

    #[test]
    fn degrees_are_converted() {
        let text = format!("{MINIMAL}\n[skew]\nstyle = step\nsegments = 3\ntheta_skew = 7.5 deg\n");
        let cfg = parse_config(&text).unwrap();
        assert!((cfg.skew.total_angle - 0.130_899_693_899_574_72).abs() < 1e-15);
        assert_eq!(parse_angle("7.5deg").unwrap(), cfg.skew.total_angle);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("0.25 rad").unwrap(), 0.25);
        assert_eq!(parse_angle("1e-1").unwrap(), 0.1);
        assert!(parse_angle("7.5 dg").is_err());
        assert!(parse_angle("deg").is_err());
    }

    #[test]
    fn synthesis_and_field_map_are_exclusive() {
        let text = format!("{MINIMAL}\n[input]\nfield_map = x.csv\n");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("mutually exclusive"), "{err}");
    }

    #[test]
    fn errors_name_the_key() {
        let e = parse_config(&MINIMAL.replace("slot_count = 48", "slot_cnt = 48")).unwrap_err();
        assert!(e.to_string().contains("geometry.slot_cnt"), "{e}");
        let e = parse_config(&MINIMAL.replace("slot_count = 48\n", "")).unwrap_err();
        assert!(e.to_string().contains("geometry.slot_count"), "{e}");
        let text = format!("{MINIMAL}\n[skew]\nstyle = step\nsegments = 3\ntheta_skew = 7.5 dgr\n");
        let e = parse_config(&text).unwrap_err();
        assert!(e.to_string().contains("skew.theta_skew"), "{e}");
        let e = parse_config(&MINIMAL.replace("pole_count = 8", "pole_count = 7")).unwrap_err();
        assert!(e.to_string().contains("geometry.pole_count"), "{e}");
    }

    #[test]
    fn overrides_replace_and_append() {
        let opts = ParseOptions {
            overrides: vec![
                "geometry.slot_count=36".into(),
                "skew.style=step".into(),
                "skew.segments=2".into(),
                "synthesis.harmonic=tangential 4 1 0.1 0".into(),
            ],
            ..Default::default()
        };
        let cfg = parse_config_with(MINIMAL, &opts).unwrap();
        assert_eq!(cfg.geometry.slot_count, 36);
        assert_eq!(cfg.skew.segment_count, 2);
        assert!(matches!(cfg.input, FieldInput::Synthesis(ref h) if h.len() == 2));
        let bad = ParseOptions {
            overrides: vec!["geometry.bogus=1".into()],
            ..Default::default()
        };
        assert!(parse_config_with(MINIMAL, &bad).is_err());
    }

    #[test]
    fn eager_validation_checks_files() {
        let text = MINIMAL.replace("[synthesis]\nharmonic = radial 4 1 1.0 0\n", "[input]\nfield_map = does-not-exist.csv\n");
        assert!(parse_config(&text).is_ok());
        let opts = ParseOptions {
            eager: true,
            ..Default::default()
        };
        let e = parse_config_with(&text, &opts).unwrap_err();
        assert!(e.to_string().contains("input.field_map"), "{e}");
    }

    #[test]
    fn harmonic_phase_units() {
        let text = MINIMAL.replace("radial 4 1 1.0 0", "tangential -20 5 0.25 90 deg");
        let cfg = parse_config(&text).unwrap();
        let FieldInput::Synthesis(h) = cfg.input else { panic!() };
        assert_eq!(h[0].component, FieldComponent::Tangential);
        assert_eq!((h[0].spatial_order, h[0].temporal_order), (-20, 5));
        assert!((h[0].phase - PI / 2.0).abs() < 1e-15);
        let bad = MINIMAL.replace("radial 4 1 1.0 0", "radial 4 1 -1.0 0");
        assert!(parse_config(&bad).is_err());
    }
}

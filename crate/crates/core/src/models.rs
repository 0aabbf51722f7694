//! The bundled model corpus.

use crate::dsl::{parse_model, Model};
use crate::error::{Error, Result};

/// `(name, source)` for every bundled `.vps` file.
pub const CORPUS: &[(&str, &str)] = &[
    ("oscillator", include_str!("../../../models/oscillator.vps")),
    ("klein_gordon", include_str!("../../../models/klein_gordon.vps")),
    ("maxwell2d", include_str!("../../../models/maxwell2d.vps")),
    ("phi4", include_str!("../../../models/phi4.vps")),
    ("particle2", include_str!("../../../models/particle2.vps")),
    ("sine_gordon", include_str!("../../../models/sine_gordon.vps")),
    ("kdv", include_str!("../../../models/kdv.vps")),
    ("wave_long_names", include_str!("../../../models/wave_long_names.vps")),
];

pub fn source(name: &str) -> Result<&'static str> {
    CORPUS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::NotFound {
            kind: "bundled model",
            name: name.to_string(),
        })
}

/// Parses a bundled model by file stem.
pub fn load(name: &str) -> Result<Model> {
    Ok(parse_model(source(name)?)?)
}

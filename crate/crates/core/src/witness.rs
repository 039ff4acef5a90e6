//! Witness certificate files.
//!
//! Two lines: a compact JSON header
//! `{"family":"semi","param":2,"r":2,"k":25,"n_points":36}` and then the
//! coloring as `n_points` base-r digits (`0-9a-z`), point `i + 1` at index `i`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::progression::{Coloring, Family};
use crate::search::check_witness;

/// Largest `r` expressible with one `0-9a-z` digit per point.
pub const MAX_FILE_COLORS: usize = 36;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessHeader {
    pub family: String,
    pub param: usize,
    pub r: usize,
    pub k: usize,
    pub n_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFile {
    pub coloring: Coloring,
    pub k: usize,
    pub family: Family,
}

impl WitnessFile {
    pub fn new(coloring: Coloring, k: usize, family: Family) -> Result<Self> {
        if coloring.r() > MAX_FILE_COLORS {
            return invalid(format!(
                "witness files support at most {MAX_FILE_COLORS} colors"
            ));
        }
        if k < 2 {
            return invalid("progressions have at least two terms");
        }
        Ok(WitnessFile {
            coloring,
            k,
            family,
        })
    }

    pub fn header(&self) -> WitnessHeader {
        WitnessHeader {
            family: self.family.kind().to_string(),
            param: self.family.param(),
            r: self.coloring.r(),
            k: self.k,
            n_points: self.coloring.n_points(),
        }
    }

    pub fn to_text(&self) -> String {
        let header = serde_json::to_string(&self.header()).expect("header serializes");
        format!("{header}\n{}\n", self.coloring.to_digits())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let head = lines
            .next()
            .ok_or_else(|| Error::Parse("empty witness file".into()))?;
        let header: WitnessHeader = serde_json::from_str(head)
            .map_err(|e| Error::Parse(format!("bad witness header: {e}")))?;
        let digits = lines
            .next()
            .ok_or_else(|| Error::Parse("missing coloring line".into()))?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(
                "unexpected content after coloring line".into(),
            ));
        }
        if !(2..=MAX_FILE_COLORS).contains(&header.r) {
            return Err(Error::Parse(format!(
                "r = {} outside 2..={MAX_FILE_COLORS}",
                header.r
            )));
        }
        let family = Family::from_parts(&header.family, header.param)
            .map_err(|e| Error::Parse(e.to_string()))?;
        let coloring =
            Coloring::from_digits(header.r, digits).map_err(|e| Error::Parse(e.to_string()))?;
        if coloring.n_points() != header.n_points {
            return Err(Error::Parse(format!(
                "header says {} points, coloring has {}",
                header.n_points,
                coloring.n_points()
            )));
        }
        WitnessFile::new(coloring, header.k, family).map_err(|e| Error::Parse(e.to_string()))
    }

    /// True iff the coloring has no monochromatic k-term progression.
    pub fn check(&self) -> Result<bool> {
        check_witness(&self.coloring, self.k, self.family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_layout() {
        let chi = Coloring::from_digits(2, "01100110").unwrap();
        let w = WitnessFile::new(chi, 3, Family::semi(1).unwrap()).unwrap();
        assert_eq!(
            w.to_text(),
            "{\"family\":\"semi\",\"param\":1,\"r\":2,\"k\":3,\"n_points\":8}\n01100110\n"
        );
        assert!(w.check().unwrap());
    }

    #[test]
    fn parse_errors() {
        let ok = "{\"family\":\"quasi\",\"param\":1,\"r\":3,\"k\":3,\"n_points\":4}\n0120";
        let w = WitnessFile::parse(ok).unwrap();
        assert_eq!(w.family, Family::quasi(1));
        assert_eq!(w.coloring.colors(), &[0, 1, 2, 0]);

        for bad in [
            "",
            "not json\n0101",
            "{\"family\":\"semi\",\"param\":1,\"r\":2,\"k\":3,\"n_points\":4}",
            "{\"family\":\"semi\",\"param\":1,\"r\":2,\"k\":3,\"n_points\":5}\n0101",
            "{\"family\":\"semi\",\"param\":1,\"r\":2,\"k\":3,\"n_points\":4}\n0121",
            "{\"family\":\"semi\",\"param\":0,\"r\":2,\"k\":3,\"n_points\":4}\n0101",
            "{\"family\":\"other\",\"param\":1,\"r\":2,\"k\":3,\"n_points\":4}\n0101",
            "{\"family\":\"semi\",\"param\":1,\"r\":40,\"k\":3,\"n_points\":4}\n0101",
            "{\"family\":\"semi\",\"param\":1,\"r\":2,\"k\":1,\"n_points\":4}\n0101",
            "{\"family\":\"semi\",\"param\":1,\"r\":2,\"k\":3,\"n_points\":4}\n0101\n0101",
        ] {
            assert!(
                matches!(WitnessFile::parse(bad), Err(Error::Parse(_))),
                "{bad:?}"
            );
        }
    }
}

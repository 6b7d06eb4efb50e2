//! JSON scenario files. Rationals are strings of the form `"a"` or `"a/b"`.

use kinetic_voronoi::motion::{MovingPoint, Scenario, ScenarioError};
use kinetic_voronoi::polygon::{validate_polygon, PolygonError};
use kinetic_voronoi::rational::{format_rat, parse_rat, ParseRatError, Point, Rat};
use kinetic_voronoi::realroots::RatPolynomial;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Polygon vertices in clockwise order.
    pub polygon: Vec<[String; 2]>,
    pub points: Vec<PointFile>,
    /// `[start, end]`.
    pub span: [String; 2],
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A moving point; `x` and `y` list coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub id: String,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioFileError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Polygon(#[from] PolygonError),
    #[error("{0}")]
    Scenario(#[from] ScenarioError),
}

impl From<ParseRatError> for ScenarioFileError {
    fn from(e: ParseRatError) -> Self {
        ScenarioFileError::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for ScenarioFileError {
    fn from(e: serde_json::Error) -> Self {
        ScenarioFileError::Parse(e.to_string())
    }
}

fn poly(c: &[String]) -> Result<RatPolynomial, ParseRatError> {
    Ok(RatPolynomial::new(c.iter().map(|s| parse_rat(s)).collect::<Result<Vec<Rat>, _>>()?))
}

fn coeffs(p: &RatPolynomial) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".to_string()];
    }
    p.coeffs().iter().map(format_rat).collect()
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<ScenarioFile, ScenarioFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files always serialize")
    }

    /// Builds the scenario; polygon validation errors come first.
    pub fn to_scenario(&self) -> Result<Scenario, ScenarioFileError> {
        let verts = self
            .polygon
            .iter()
            .map(|[x, y]| Ok(Point::new(parse_rat(x)?, parse_rat(y)?)))
            .collect::<Result<Vec<Point>, ParseRatError>>()?;
        let points = self
            .points
            .iter()
            .map(|p| Ok(MovingPoint::new(p.id.clone(), poly(&p.x)?, poly(&p.y)?)))
            .collect::<Result<Vec<MovingPoint>, ParseRatError>>()?;
        let t0 = parse_rat(&self.span[0])?;
        let t1 = parse_rat(&self.span[1])?;
        let q = validate_polygon(&verts)?;
        Ok(Scenario::new(q, points, t0, t1, self.degree)?)
    }

    pub fn from_scenario(s: &Scenario, seed: Option<u64>) -> ScenarioFile {
        ScenarioFile {
            polygon: s.polygon.vertices().iter().map(|v| [format_rat(&v.x), format_rat(&v.y)]).collect(),
            points: s
                .points
                .iter()
                .map(|p| PointFile { id: p.id.clone(), x: coeffs(&p.x), y: coeffs(&p.y) })
                .collect(),
            span: [format_rat(&s.t_start), format_rat(&s.t_end)],
            degree: s.degree,
            seed,
        }
    }
}

pub fn load(path: &std::path::Path) -> Result<ScenarioFile, ScenarioFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioFileError::Parse(format!("{}: {e}", path.display())))?;
    ScenarioFile::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{
        "polygon": [["1","1"],["1","-1"],["-1","-1"],["-1","1"]],
        "points": [
            {"id": "a", "x": ["0"], "y": ["0"]},
            {"id": "b", "x": ["4"], "y": ["1/3", "1"]}
        ],
        "span": ["0", "1"],
        "degree": 1
    }"#;

    #[test]
    fn square_round_trips() {
        let f = ScenarioFile::parse(SQUARE).unwrap();
        let s = f.to_scenario().unwrap();
        assert_eq!(s.n(), 2);
        let g = ScenarioFile::from_scenario(&s, None);
        assert_eq!(f, g);
        assert_eq!(ScenarioFile::parse(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let bad = SQUARE.replace("\"1/3\"", "\"1/0\"");
        let f = ScenarioFile::parse(&bad).unwrap();
        assert!(matches!(f.to_scenario(), Err(ScenarioFileError::Parse(_))));
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = SQUARE.replace("\"degree\"", "\"extra\": 1, \"degree\"");
        assert!(ScenarioFile::parse(&bad).is_err());
    }
}

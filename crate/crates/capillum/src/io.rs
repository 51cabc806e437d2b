//! JSON input files: `{"n": 4, "vertices": [[...], ...]}` for bodies and
//! `{"n": 4, "directions": [[...], ...]}` for direction sets.

use std::fs;
use std::path::Path;

use capillum_core::oracle::{CapBody, DirectionSet};
use serde::{Deserialize, Serialize};

use crate::{AppError, AppResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyFile {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionFile {
    pub n: usize,
    #[serde(alias = "vertices")]
    pub directions: Vec<Vec<f64>>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> AppResult<T> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| AppError::Io { path: name.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| AppError::Json { path: name, source })
}

pub fn read_body(path: &Path) -> AppResult<CapBody> {
    let file: BodyFile = read_json(path)?;
    Ok(CapBody::new(file.n, file.vertices)?)
}

pub fn read_directions(path: &Path) -> AppResult<DirectionSet> {
    let file: DirectionFile = read_json(path)?;
    Ok(DirectionSet::new(file.n, file.directions)?)
}

pub fn body_file(body: &CapBody) -> BodyFile {
    BodyFile { n: body.dim(), vertices: body.vertices().to_vec() }
}

pub fn direction_file(set: &DirectionSet) -> DirectionFile {
    DirectionFile { n: set.dim(), directions: set.directions().to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("body.json");
        fs::write(&path, r#"{"n": 3, "vertices": [[1.2, 0.0, 0.0], [0.0, -1.5, 0.0]]}"#).unwrap();
        let body = read_body(&path).unwrap();
        assert_eq!(body.len(), 2);
        assert_eq!(body_file(&body).vertices[1], vec![0.0, -1.5, 0.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, r#"{"n": 3, "vertices": [[0.5, 0.0, 0.0]]}"#).unwrap();
        assert!(matches!(read_body(&path), Err(AppError::Core(_))));
        fs::write(&path, "not json").unwrap();
        assert!(matches!(read_body(&path), Err(AppError::Json { .. })));
        assert!(matches!(read_body(&dir.path().join("missing.json")), Err(AppError::Io { .. })));
    }

    #[test]
    fn directions_accept_either_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dirs.json");
        fs::write(&path, r#"{"n": 2, "vertices": [[3.0, 4.0]]}"#).unwrap();
        let set = read_directions(&path).unwrap();
        assert!((set.directions()[0][0] - 0.6).abs() < 1e-15);
    }
}

//! JSON tensor format for the `dcpe` subcommand.
//!
//! Input:
//!
//! ```json
//! { "text": [[f64; C]; L], "visual": [[[f64; C]; W]; H],
//!   "text_layers": [[3, 1], [3, 2]], "visual_layers": [[3, 1], [3, 2]], "seed": 0 }
//! ```
//!
//! Layer lists are `[kernel_size, dilation]` pairs and default to the two-layer
//! stack above; weights are Xavier-uniform from `seed`. Output is
//! `{ "text_len", "visual_len", "channels", "parameters", "data": [[f64; C]; L + H*W] }`.

use readorder_core::dcpe::{Dcpe, DcpeConfig, FeatureGrid, FeatureSeq, LayerSpec};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
pub struct DcpeRequest {
    pub text: Vec<Vec<f64>>,
    pub visual: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub text_layers: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub visual_layers: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct DcpeResponse {
    pub text_len: usize,
    pub visual_len: usize,
    pub channels: usize,
    pub parameters: usize,
    pub data: Vec<Vec<f64>>,
}

fn shape_error(msg: impl Into<String>) -> Error {
    Error::Core(readorder_core::Error::ShapeMismatch(msg.into()))
}

fn rows_to_seq(rows: &[Vec<f64>]) -> Result<FeatureSeq> {
    let channels = rows.first().map(Vec::len).ok_or_else(|| shape_error("text must have at least one row"))?;
    if rows.iter().any(|r| r.len() != channels) {
        return Err(shape_error("text rows must all have the same channel count"));
    }
    Ok(FeatureSeq::new(rows.len(), channels, rows.concat())?)
}

fn grid_from(rows: &[Vec<Vec<f64>>]) -> Result<FeatureGrid> {
    let height = rows.len();
    let width = rows.first().map(Vec::len).unwrap_or(0);
    let channels = rows.first().and_then(|r| r.first()).map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != width || r.iter().any(|c| c.len() != channels)) {
        return Err(shape_error("visual grid must be rectangular with a fixed channel count"));
    }
    let data: Vec<f64> = rows.iter().flatten().flatten().copied().collect();
    Ok(FeatureGrid::new(height, width, channels, data)?)
}

fn layers(spec: Option<Vec<(usize, usize)>>) -> Vec<LayerSpec> {
    spec.map(|v| v.into_iter().map(|(k, l)| LayerSpec::new(k, l)).collect())
        .unwrap_or_else(|| vec![LayerSpec::new(3, 1), LayerSpec::new(3, 2)])
}

pub fn run_dcpe(request: DcpeRequest) -> Result<DcpeResponse> {
    let text = rows_to_seq(&request.text)?;
    let vis = grid_from(&request.visual)?;
    let config = DcpeConfig {
        channels: text.channels(),
        text_layers: layers(request.text_layers),
        visual_layers: layers(request.visual_layers),
    };
    let model = Dcpe::seeded(config, request.seed)?;
    let out = model.forward(&text, &vis)?;
    Ok(DcpeResponse {
        text_len: text.len(),
        visual_len: vis.height() * vis.width(),
        channels: out.channels(),
        parameters: model.parameter_count(),
        data: out.data().chunks(out.channels()).map(<[f64]>::to_vec).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let req: DcpeRequest = serde_json::from_str(
            r#"{"text": [[1,0],[0,1],[1,1],[0,0]], "visual": [[[1,1],[2,2]],[[3,3],[4,4]]], "seed": 3}"#,
        )
        .unwrap();
        let out = run_dcpe(req).unwrap();
        assert_eq!(out.text_len, 4);
        assert_eq!(out.visual_len, 4);
        assert_eq!(out.data.len(), 8);
        assert!(out.data.iter().all(|r| r.len() == 2));
        // 2 layers * (3*2*2 + 2) + 2 layers * (9*2*2 + 2)
        assert_eq!(out.parameters, 2 * 14 + 2 * 38);
    }

    #[test]
    fn ragged_input_rejected() {
        let req: DcpeRequest = serde_json::from_str(r#"{"text": [[1,0],[0]], "visual": [[[1,1]]]}"#).unwrap();
        assert!(run_dcpe(req).is_err());
        let req: DcpeRequest = serde_json::from_str(r#"{"text": [[1]], "visual": [[[1,1]]]}"#).unwrap();
        assert!(run_dcpe(req).is_err());
    }
}

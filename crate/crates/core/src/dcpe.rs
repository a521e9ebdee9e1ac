//! Dilated conditional position encoding, forward pass only.
//!
//! A dilated convolution with rate `l` reads its input at offsets `l * t`
//! for a centred tap index `t in [-(k-1)/2, (k-1)/2]`:
//!
//! ```text
//! out(p) = sum over t of in(p - l*t) * w(t)
//! ```
//!
//! Inputs are zero-padded by `l * (k-1) / 2` per side so the output keeps the
//! input resolution. Text features go through a stack of 1-D dilated
//! convolutions, the visual token grid through a stack of 2-D ones; the two
//! results are concatenated (text first, grid flattened row-major).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

/// `len x channels` features, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSeq {
    len: usize,
    channels: usize,
    data: Vec<f64>,
}

impl FeatureSeq {
    pub fn new(len: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if len == 0 || channels == 0 {
            return Err(Error::ShapeMismatch("sequence length and channels must be positive".into()));
        }
        if data.len() != len * channels {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values for {len}x{channels}, got {}",
                len * channels,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::ShapeMismatch("feature values must be finite".into()));
        }
        Ok(Self { len, channels, data })
    }

    pub fn zeros(len: usize, channels: usize) -> Result<Self> {
        Self::new(len, channels, vec![0.0; len * channels])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, pos: usize, channel: usize) -> f64 {
        self.data[pos * self.channels + channel]
    }
}

/// `height x width x channels` features, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureGrid {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl FeatureGrid {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::ShapeMismatch("grid dimensions must be positive".into()));
        }
        if data.len() != height * width * channels {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values for {height}x{width}x{channels}, got {}",
                height * width * channels,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::ShapeMismatch("feature values must be finite".into()));
        }
        Ok(Self { height, width, channels, data })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize, channel: usize) -> f64 {
        self.data[(row * self.width + col) * self.channels + channel]
    }

    /// Row-major flattening into a `height*width` long sequence.
    pub fn flatten(&self) -> FeatureSeq {
        FeatureSeq { len: self.height * self.width, channels: self.channels, data: self.data.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelShape {
    /// `k` taps along a sequence.
    Line,
    /// `k x k` taps over a grid.
    Square,
}

/// Convolution weights laid out `[out][in][tap]`; for square kernels the tap
/// index is `row * k + col`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilatedKernel {
    shape: KernelShape,
    size: usize,
    dilation: usize,
    in_channels: usize,
    out_channels: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl DilatedKernel {
    pub fn new(
        shape: KernelShape,
        size: usize,
        dilation: usize,
        in_channels: usize,
        out_channels: usize,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(Error::InvalidParams("kernel size must be odd"));
        }
        if dilation == 0 {
            return Err(Error::InvalidParams("dilation must be at least 1"));
        }
        if in_channels == 0 || out_channels == 0 {
            return Err(Error::InvalidParams("channel counts must be positive"));
        }
        let taps = match shape {
            KernelShape::Line => size,
            KernelShape::Square => size * size,
        };
        if weights.len() != taps * in_channels * out_channels {
            return Err(Error::ShapeMismatch(format!(
                "expected {} weights, got {}",
                taps * in_channels * out_channels,
                weights.len()
            )));
        }
        Ok(Self { shape, size, dilation, in_channels, out_channels, weights, bias: vec![0.0; out_channels] })
    }

    pub fn line(
        size: usize,
        dilation: usize,
        in_channels: usize,
        out_channels: usize,
        weights: Vec<f64>,
    ) -> Result<Self> {
        Self::new(KernelShape::Line, size, dilation, in_channels, out_channels, weights)
    }

    pub fn square(
        size: usize,
        dilation: usize,
        in_channels: usize,
        out_channels: usize,
        weights: Vec<f64>,
    ) -> Result<Self> {
        Self::new(KernelShape::Square, size, dilation, in_channels, out_channels, weights)
    }

    /// Xavier-uniform weights drawn from `rng`, zero bias.
    pub fn xavier<R: Rng + ?Sized>(
        shape: KernelShape,
        size: usize,
        dilation: usize,
        in_channels: usize,
        out_channels: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let taps = match shape {
            KernelShape::Line => size,
            KernelShape::Square => size * size,
        };
        let fan = ((in_channels + out_channels) * taps) as f64;
        let bound = libm::sqrt(6.0 / fan);
        let weights = (0..taps * in_channels * out_channels).map(|_| rng.random_range(-bound..=bound)).collect();
        Self::new(shape, size, dilation, in_channels, out_channels, weights)
    }

    pub fn with_bias(mut self, bias: Vec<f64>) -> Result<Self> {
        if bias.len() != self.out_channels {
            return Err(Error::ShapeMismatch(format!(
                "expected {} bias values, got {}",
                self.out_channels,
                bias.len()
            )));
        }
        self.bias = bias;
        Ok(self)
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dilation(&self) -> usize {
        self.dilation
    }

    pub fn in_channels(&self) -> usize {
        self.in_channels
    }

    pub fn out_channels(&self) -> usize {
        self.out_channels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// `k * C_in * C_out` for lines, `k^2 * C_in * C_out` for squares.
    /// Does not depend on the dilation rate.
    pub fn weight_count(&self) -> usize {
        self.weights.len()
    }

    /// Weights plus biases.
    pub fn parameter_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }

    /// Same weights, different dilation rate.
    pub fn with_dilation(&self, dilation: usize) -> Result<Self> {
        if dilation == 0 {
            return Err(Error::InvalidParams("dilation must be at least 1"));
        }
        Ok(Self { dilation, ..self.clone() })
    }

    fn taps(&self) -> usize {
        match self.shape {
            KernelShape::Line => self.size,
            KernelShape::Square => self.size * self.size,
        }
    }

    #[inline]
    fn weight(&self, out: usize, inp: usize, tap: usize) -> f64 {
        self.weights[(out * self.in_channels + inp) * self.taps() + tap]
    }
}

/// Input position read by tap `j` for output `p`, if it is in bounds.
#[inline]
fn source(p: usize, j: usize, half: usize, dilation: usize, len: usize) -> Option<usize> {
    // s = p - l * (j - half) = p + l * half - l * j
    let s = (p + dilation * half).checked_sub(dilation * j)?;
    (s < len).then_some(s)
}

/// 1-D dilated convolution, resolution preserving.
pub fn dilated_conv_1d(f: &FeatureSeq, ker: &DilatedKernel) -> Result<FeatureSeq> {
    if ker.shape != KernelShape::Line {
        return Err(Error::ShapeMismatch("1-D convolution needs a line kernel".into()));
    }
    if f.channels != ker.in_channels {
        return Err(Error::ShapeMismatch(format!(
            "input has {} channels, kernel expects {}",
            f.channels, ker.in_channels
        )));
    }
    let half = (ker.size - 1) / 2;
    let mut out = vec![0.0; f.len * ker.out_channels];
    for p in 0..f.len {
        for o in 0..ker.out_channels {
            let mut acc = ker.bias[o];
            for j in 0..ker.size {
                let Some(s) = source(p, j, half, ker.dilation, f.len) else { continue };
                for i in 0..ker.in_channels {
                    acc += f.get(s, i) * ker.weight(o, i, j);
                }
            }
            out[p * ker.out_channels + o] = acc;
        }
    }
    FeatureSeq::new(f.len, ker.out_channels, out)
}

/// 2-D dilated convolution over a grid, resolution preserving.
pub fn dilated_conv_2d(f: &FeatureGrid, ker: &DilatedKernel) -> Result<FeatureGrid> {
    if ker.shape != KernelShape::Square {
        return Err(Error::ShapeMismatch("2-D convolution needs a square kernel".into()));
    }
    if f.channels != ker.in_channels {
        return Err(Error::ShapeMismatch(format!(
            "input has {} channels, kernel expects {}",
            f.channels, ker.in_channels
        )));
    }
    let k = ker.size;
    let half = (k - 1) / 2;
    let mut out = vec![0.0; f.height * f.width * ker.out_channels];
    for py in 0..f.height {
        for px in 0..f.width {
            for o in 0..ker.out_channels {
                let mut acc = ker.bias[o];
                for jy in 0..k {
                    let Some(sy) = source(py, jy, half, ker.dilation, f.height) else { continue };
                    for jx in 0..k {
                        let Some(sx) = source(px, jx, half, ker.dilation, f.width) else { continue };
                        for i in 0..ker.in_channels {
                            acc += f.get(sy, sx, i) * ker.weight(o, i, jy * k + jx);
                        }
                    }
                }
                out[(py * f.width + px) * ker.out_channels + o] = acc;
            }
        }
    }
    FeatureGrid::new(f.height, f.width, ker.out_channels, out)
}

/// Kernel size and dilation rate of one convolution layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayerSpec {
    pub kernel_size: usize,
    pub dilation: usize,
}

impl LayerSpec {
    pub const fn new(kernel_size: usize, dilation: usize) -> Self {
        Self { kernel_size, dilation }
    }
}

/// Input span seen by one output of a stack: `1 + sum (k_i - 1) * l_i`.
pub fn receptive_field(stack: &[LayerSpec]) -> usize {
    1 + stack.iter().map(|l| (l.kernel_size - 1) * l.dilation).sum::<usize>()
}

/// Layer stacks for both branches and the shared channel width.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DcpeConfig {
    pub channels: usize,
    pub text_layers: Vec<LayerSpec>,
    pub visual_layers: Vec<LayerSpec>,
}

impl DcpeConfig {
    /// Two layers per branch, rates 1 then 2, kernel size 3.
    pub fn with_channels(channels: usize) -> Self {
        let stack = vec![LayerSpec::new(3, 1), LayerSpec::new(3, 2)];
        Self { channels, text_layers: stack.clone(), visual_layers: stack }
    }

    pub fn validate(&self) -> Result<()> {
        if self.channels == 0 {
            return Err(Error::InvalidParams("channel width must be positive"));
        }
        if self.text_layers.is_empty() || self.visual_layers.is_empty() {
            return Err(Error::InvalidParams("each branch needs at least one layer"));
        }
        let all = self.text_layers.iter().chain(&self.visual_layers);
        if all.clone().any(|l| l.kernel_size.is_multiple_of(2)) {
            return Err(Error::InvalidParams("kernel size must be odd"));
        }
        if all.clone().any(|l| l.dilation == 0) {
            return Err(Error::InvalidParams("dilation must be at least 1"));
        }
        Ok(())
    }
}

/// A configured encoder: one line kernel per text layer and one square
/// kernel per visual layer, all `channels -> channels`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dcpe {
    config: DcpeConfig,
    text: Vec<DilatedKernel>,
    visual: Vec<DilatedKernel>,
}

impl Dcpe {
    pub fn new(config: DcpeConfig, text: Vec<DilatedKernel>, visual: Vec<DilatedKernel>) -> Result<Self> {
        config.validate()?;
        let check = |specs: &[LayerSpec], kernels: &[DilatedKernel], shape: KernelShape| -> Result<()> {
            if specs.len() != kernels.len() {
                return Err(Error::ShapeMismatch("one kernel per configured layer".into()));
            }
            for (s, k) in specs.iter().zip(kernels) {
                if k.shape != shape
                    || k.size != s.kernel_size
                    || k.dilation != s.dilation
                    || k.in_channels != config.channels
                    || k.out_channels != config.channels
                {
                    return Err(Error::ShapeMismatch(format!(
                        "kernel ({:?}, k={}, l={}, {}->{}) does not match layer {:?} at width {}",
                        k.shape, k.size, k.dilation, k.in_channels, k.out_channels, s, config.channels
                    )));
                }
            }
            Ok(())
        };
        check(&config.text_layers, &text, KernelShape::Line)?;
        check(&config.visual_layers, &visual, KernelShape::Square)?;
        Ok(Self { config, text, visual })
    }

    /// Xavier-uniform weights from a ChaCha8 stream seeded with `seed`.
    pub fn seeded(config: DcpeConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = config.channels;
        let text = config
            .text_layers
            .iter()
            .map(|l| DilatedKernel::xavier(KernelShape::Line, l.kernel_size, l.dilation, c, c, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let visual = config
            .visual_layers
            .iter()
            .map(|l| DilatedKernel::xavier(KernelShape::Square, l.kernel_size, l.dilation, c, c, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Self::new(config, text, visual)
    }

    pub fn config(&self) -> &DcpeConfig {
        &self.config
    }

    pub fn text_kernels(&self) -> &[DilatedKernel] {
        &self.text
    }

    pub fn visual_kernels(&self) -> &[DilatedKernel] {
        &self.visual
    }

    pub fn parameter_count(&self) -> usize {
        self.text.iter().chain(&self.visual).map(DilatedKernel::parameter_count).sum()
    }

    /// Encodes both branches and concatenates them: the output has
    /// `text.len() + height * width` rows.
    pub fn forward(&self, text: &FeatureSeq, vis: &FeatureGrid) -> Result<FeatureSeq> {
        let c = self.config.channels;
        if text.channels != c || vis.channels != c {
            return Err(Error::ShapeMismatch(format!(
                "encoder width is {c}, got text {} and visual {} channels",
                text.channels, vis.channels
            )));
        }
        let mut t = text.clone();
        for k in &self.text {
            t = dilated_conv_1d(&t, k)?;
        }
        let mut v = vis.clone();
        for k in &self.visual {
            v = dilated_conv_2d(&v, k)?;
        }
        let mut data = t.data;
        data.extend_from_slice(&v.data);
        FeatureSeq::new(t.len + v.height * v.width, c, data)
    }
}

pub fn dcpe_forward(text: &FeatureSeq, vis: &FeatureGrid, model: &Dcpe) -> Result<FeatureSeq> {
    model.forward(text, vis)
}

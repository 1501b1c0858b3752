//! Multilayer perceptron classifier over flat `f64` parameters.
//!
//! With an empty hidden list this is plain multinomial logistic
//! regression; the loss is mean softmax cross-entropy over the batch, so
//! its lower bound is 0.

use super::{check_batch, check_dim, Batch, Dataset, Problem};
use crate::error::{ensure_finite, Error, Result};
use crate::rng::{rng_from_seed, uniform_in};

/// Hidden layer nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Relu,
}

impl Activation {
    pub fn name(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Relu => "relu",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "tanh" => Ok(Activation::Tanh),
            "relu" => Ok(Activation::Relu),
            other => Err(Error::Config(format!(
                "unknown activation {other:?}; expected tanh or relu"
            ))),
        }
    }

    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(0.0),
        }
    }

    /// Derivative expressed through the post-activation value `a`.
    /// For tanh, `1 - a^2`; for relu, the subgradient is 0 at the kink.
    fn deriv_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Layer shape of an MLP classifier.
///
/// Parameters are stored flat, layer by layer: the weight matrix
/// (`fan_out` rows by `fan_in` columns, row-major) followed by the bias
/// vector. The last layer produces logits with no activation.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpArch {
    pub input: usize,
    pub hidden: Vec<usize>,
    pub output: usize,
    pub activation: Activation,
}

impl MlpArch {
    pub fn new(
        input: usize,
        hidden: Vec<usize>,
        output: usize,
        activation: Activation,
    ) -> Result<Self> {
        if input == 0 || output < 2 || hidden.iter().any(|&h| h == 0) {
            return Err(Error::Config(format!(
                "bad MLP shape: input {input}, hidden {hidden:?}, output {output}"
            )));
        }
        Ok(Self {
            input,
            hidden,
            output,
            activation,
        })
    }

    /// `[input, hidden..., output]`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::with_capacity(self.hidden.len() + 2);
        sizes.push(self.input);
        sizes.extend_from_slice(&self.hidden);
        sizes.push(self.output);
        sizes
    }

    pub fn param_count(&self) -> usize {
        let sizes = self.layer_sizes();
        sizes
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }

    /// Glorot uniform initialization: weights from
    /// `U[-sqrt(6 / (fan_in + fan_out)), +sqrt(6 / (fan_in + fan_out)))`,
    /// biases zero. Weights are drawn in storage order from a single
    /// stream, so the result is a pure function of the seed.
    pub fn glorot_init(&self, seed: u64) -> Vec<f64> {
        let mut rng = rng_from_seed(seed);
        let sizes = self.layer_sizes();
        let mut params = Vec::with_capacity(self.param_count());
        for w in sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for _ in 0..fan_in * fan_out {
                params.push(uniform_in(&mut rng, -bound, bound));
            }
            params.extend(std::iter::repeat(0.0).take(fan_out));
        }
        params
    }
}

/// Softmax cross-entropy for one example, numerically stabilized by
/// subtracting the max logit.
///
/// Returns the loss `log(sum_j exp(z_j)) - z_label` and its gradient with
/// respect to the logits, `softmax(z) - onehot(label)`.
pub fn softmax_xent(logits: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
    ensure_finite("logits", logits)?;
    if label >= logits.len() {
        return Err(Error::Data(format!(
            "label {label} out of range for {} logits",
            logits.len()
        )));
    }
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    let mut grad: Vec<f64> = logits
        .iter()
        .map(|&z| {
            let e = (z - max).exp();
            sum += e;
            e
        })
        .collect();
    let loss = sum.ln() - (logits[label] - max);
    for g in &mut grad {
        *g /= sum;
    }
    grad[label] -= 1.0;
    Ok((loss, grad))
}

/// MLP (or, with no hidden layers, logistic regression) classifier over a
/// fixed [`Dataset`], trained with mean softmax cross-entropy.
#[derive(Debug, Clone)]
pub struct MlpProblem {
    arch: MlpArch,
    data: Dataset,
    /// Flat offset of each layer's weight block; biases follow weights.
    offsets: Vec<usize>,
    sizes: Vec<usize>,
}

impl MlpProblem {
    pub fn new(arch: MlpArch, data: Dataset) -> Result<Self> {
        if arch.input != data.d() {
            return Err(Error::Config(format!(
                "MLP input size {} does not match dataset features {}",
                arch.input,
                data.d()
            )));
        }
        if arch.output != data.classes() {
            return Err(Error::Config(format!(
                "MLP output size {} does not match dataset classes {}",
                arch.output,
                data.classes()
            )));
        }
        let sizes = arch.layer_sizes();
        let mut offsets = Vec::with_capacity(sizes.len() - 1);
        let mut off = 0;
        for w in sizes.windows(2) {
            offsets.push(off);
            off += w[0] * w[1] + w[1];
        }
        Ok(Self {
            arch,
            data,
            offsets,
            sizes,
        })
    }

    pub fn arch(&self) -> &MlpArch {
        &self.arch
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    fn layers(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Post-activation values per layer, `acts[0]` being the input row and
    /// `acts[L]` the logits.
    fn forward_one(&self, params: &[f64], x: &[f64]) -> Vec<Vec<f64>> {
        let layers = self.layers();
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(layers + 1);
        acts.push(x.to_vec());
        for l in 0..layers {
            let (fan_in, fan_out) = (self.sizes[l], self.sizes[l + 1]);
            let w = &params[self.offsets[l]..self.offsets[l] + fan_in * fan_out];
            let b = &params[self.offsets[l] + fan_in * fan_out..self.offsets[l] + fan_in * fan_out + fan_out];
            let a_prev = &acts[l];
            let mut a = Vec::with_capacity(fan_out);
            for o in 0..fan_out {
                let mut z = b[o];
                let row = &w[o * fan_in..(o + 1) * fan_in];
                for i in 0..fan_in {
                    z += row[i] * a_prev[i];
                }
                a.push(if l + 1 < layers {
                    self.arch.activation.apply(z)
                } else {
                    z
                });
            }
            acts.push(a);
        }
        acts
    }
}

impl Problem for MlpProblem {
    fn dim(&self) -> usize {
        self.arch.param_count()
    }

    fn f_star(&self) -> f64 {
        0.0
    }

    fn n_examples(&self) -> usize {
        self.data.n()
    }

    fn eval(&self, params: &[f64], batch: Batch) -> Result<f64> {
        check_dim(self.dim(), params)?;
        check_batch(self.data.n(), &batch)?;
        let mut total = 0.0;
        for &i in batch.indices {
            let acts = self.forward_one(params, self.data.feature_row(i));
            let (loss, _) = softmax_xent(&acts[self.layers()], self.data.label(i))?;
            total += loss;
        }
        Ok(total / batch.indices.len() as f64)
    }

    fn eval_grad(&self, params: &[f64], batch: Batch) -> Result<(f64, Vec<f64>)> {
        check_dim(self.dim(), params)?;
        check_batch(self.data.n(), &batch)?;
        let layers = self.layers();
        let mut grad = vec![0.0; self.dim()];
        let mut total = 0.0;
        for &idx in batch.indices {
            let acts = self.forward_one(params, self.data.feature_row(idx));
            let (loss, mut dz) = softmax_xent(&acts[layers], self.data.label(idx))?;
            total += loss;
            // Backpropagate, accumulating raw sums; scale by 1/batch at the
            // end so accumulation order is fixed and divisions happen once.
            for l in (0..layers).rev() {
                let (fan_in, fan_out) = (self.sizes[l], self.sizes[l + 1]);
                let w_off = self.offsets[l];
                let b_off = w_off + fan_in * fan_out;
                let a_prev = &acts[l];
                for o in 0..fan_out {
                    let dzo = dz[o];
                    grad[b_off + o] += dzo;
                    let row = &mut grad[w_off + o * fan_in..w_off + (o + 1) * fan_in];
                    for i in 0..fan_in {
                        row[i] += dzo * a_prev[i];
                    }
                }
                if l > 0 {
                    let w = &params[w_off..b_off];
                    let mut dz_prev = Vec::with_capacity(fan_in);
                    for i in 0..fan_in {
                        let mut s = 0.0;
                        for o in 0..fan_out {
                            s += w[o * fan_in + i] * dz[o];
                        }
                        dz_prev.push(s * self.arch.activation.deriv_from_output(a_prev[i]));
                    }
                    dz = dz_prev;
                }
            }
        }
        let scale = 1.0 / batch.indices.len() as f64;
        for g in &mut grad {
            *g *= scale;
        }
        Ok((total / batch.indices.len() as f64, grad))
    }

    fn initial_params(&self, seed: u64) -> Vec<f64> {
        self.arch.glorot_init(seed)
    }
}

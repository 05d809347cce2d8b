//! Dense multidimensional real arrays.
//!
//! Row-major, contiguous, with the element type fixed at construction:
//! `f64` for gradient checks and oracles, `f32` for training. Image tensors
//! are channel-first (`[channels, height, width]`), with an optional leading
//! batch axis.

use std::fmt;

use thiserror::Error;

use crate::rng::Rng;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("shape must have at least one dimension")]
    EmptyShape,
    #[error("dimension {index} is zero; all dimensions must be >= 1")]
    ZeroDim { index: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("data length {len} does not match shape {shape:?}")]
    LengthMismatch { len: usize, shape: Vec<usize> },
    #[error("matmul expects rank-2 operands with agreeing inner dims, got {left:?} x {right:?}")]
    MatmulShape { left: Vec<usize>, right: Vec<usize> },
    #[error("invalid axis {axis} for rank {rank}")]
    InvalidAxis { axis: usize, rank: usize },
    #[error("duplicate axis {axis}")]
    DuplicateAxis { axis: usize },
    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),
}

/// Element types a tensor can hold. Implemented for `f32` and `f64`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Default
    + Send
    + Sync
    + fmt::Debug
    + fmt::Display
    + 'static
{
    /// Dtype byte in the binary tensor format (0 = f32, 1 = f64).
    const DTYPE: u8;
    const BYTES: usize;

    fn from_f64(x: f64) -> Self;
    fn to_f64_exact(self) -> f64;
    fn write_le(self, out: &mut Vec<u8>);
    fn read_le(bytes: &[u8]) -> Self;

    /// `c = alpha * a @ b + beta * c` over raw row-major buffers.
    #[allow(clippy::too_many_arguments)]
    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    );
}

impl Scalar for f32 {
    const DTYPE: u8 = 0;
    const BYTES: usize = 4;

    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn to_f64_exact(self) -> f64 {
        f64::from(self)
    }

    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn read_le(bytes: &[u8]) -> Self {
        f32::from_le_bytes(bytes.try_into().expect("f32 needs 4 bytes"))
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::sgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc)
    }
}

impl Scalar for f64 {
    const DTYPE: u8 = 1;
    const BYTES: usize = 8;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64_exact(self) -> f64 {
        self
    }

    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn read_le(bytes: &[u8]) -> Self {
        f64::from_le_bytes(bytes.try_into().expect("f64 needs 8 bytes"))
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::dgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc)
    }
}

fn check_shape(shape: &[usize]) -> Result<usize, TensorError> {
    if shape.is_empty() {
        return Err(TensorError::EmptyShape);
    }
    let mut count = 1usize;
    for (index, &d) in shape.iter().enumerate() {
        if d == 0 {
            return Err(TensorError::ZeroDim { index });
        }
        count = count
            .checked_mul(d)
            .ok_or_else(|| TensorError::InvalidParameter("shape overflows usize".into()))?;
    }
    Ok(count)
}

/// Dense row-major array with shape metadata.
#[derive(Clone, PartialEq)]
pub struct Tensor<T: Scalar = f32> {
    shape: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Tensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor{:?}", self.shape)?;
        if self.data.len() <= 8 {
            write!(f, " {:?}", self.data)
        } else {
            write!(f, " [{:?}, {:?}, ...]", self.data[0], self.data[1])
        }
    }
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(shape: &[usize]) -> Result<Self, TensorError> {
        let count = check_shape(shape)?;
        Ok(Self { shape: shape.to_vec(), data: vec![T::zero(); count] })
    }

    pub fn full(shape: &[usize], value: T) -> Result<Self, TensorError> {
        let count = check_shape(shape)?;
        Ok(Self { shape: shape.to_vec(), data: vec![value; count] })
    }

    pub fn from_vec(shape: &[usize], data: Vec<T>) -> Result<Self, TensorError> {
        let count = check_shape(shape)?;
        if data.len() != count {
            return Err(TensorError::LengthMismatch { len: data.len(), shape: shape.to_vec() });
        }
        Ok(Self { shape: shape.to_vec(), data })
    }

    /// Single-element tensor of shape `[1]`.
    pub fn scalar(value: T) -> Self {
        Self { shape: vec![1], data: vec![value] }
    }

    /// I.i.d. Gaussian draws, reproducible from the generator state.
    pub fn gaussian(rng: &mut Rng, shape: &[usize], mean: f64, std: f64) -> Result<Self, TensorError> {
        if !(std > 0.0) {
            return Err(TensorError::InvalidParameter(format!("std must be > 0, got {std}")));
        }
        let count = check_shape(shape)?;
        let data = (0..count).map(|_| T::from_f64(mean + std * rng.normal())).collect();
        Ok(Self { shape: shape.to_vec(), data })
    }

    /// I.i.d. uniform draws in `[lo, hi)`.
    pub fn uniform(rng: &mut Rng, shape: &[usize], lo: f64, hi: f64) -> Result<Self, TensorError> {
        if !(lo < hi) {
            return Err(TensorError::InvalidParameter(format!("need lo < hi, got {lo} >= {hi}")));
        }
        let count = check_shape(shape)?;
        let data = (0..count).map(|_| T::from_f64(rng.uniform(lo, hi))).collect();
        Ok(Self { shape: shape.to_vec(), data })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    /// Row-major strides for the current shape.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.shape.len()];
        for i in (0..self.shape.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.shape[i + 1];
        }
        strides
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len(), "index rank mismatch");
        let mut flat = 0;
        for (axis, (&i, &d)) in idx.iter().zip(&self.shape).enumerate() {
            debug_assert!(i < d, "index {i} out of bounds for axis {axis} of size {d}");
            flat = flat * d + i;
        }
        flat
    }

    pub fn at(&self, idx: &[usize]) -> T {
        self.data[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: T) {
        let flat = self.flat_index(idx);
        self.data[flat] = value;
    }

    /// Same data, new shape; element counts must agree.
    pub fn reshape(&self, shape: &[usize]) -> Result<Self, TensorError> {
        let count = check_shape(shape)?;
        if count != self.data.len() {
            return Err(TensorError::LengthMismatch { len: self.data.len(), shape: shape.to_vec() });
        }
        Ok(Self { shape: shape.to_vec(), data: self.data.clone() })
    }

    fn zip_with(&self, other: &Self, op: impl Fn(T, T) -> T) -> Result<Self, TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch {
                left: self.shape.clone(),
                right: other.shape.clone(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(Self { shape: self.shape.clone(), data })
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| a * b)
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &Self) -> Result<(), TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch {
                left: self.shape.clone(),
                right: other.shape.clone(),
            });
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + b;
        }
        Ok(())
    }

    /// In-place `self += factor * other`; the SGD update kernel.
    pub fn add_scaled_assign(&mut self, other: &Self, factor: T) -> Result<(), TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch {
                left: self.shape.clone(),
                right: other.shape.clone(),
            });
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + factor * b;
        }
        Ok(())
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|x| x * factor)
    }

    pub fn map(&self, op: impl Fn(T) -> T) -> Self {
        Self { shape: self.shape.clone(), data: self.data.iter().map(|&x| op(x)).collect() }
    }

    pub fn cast<U: Scalar>(&self) -> Tensor<U> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&x| U::from_f64(x.to_f64_exact())).collect(),
        }
    }

    /// Standard matrix product of rank-2 tensors.
    pub fn matmul(&self, other: &Self) -> Result<Self, TensorError> {
        if self.rank() != 2 || other.rank() != 2 || self.shape[1] != other.shape[0] {
            return Err(TensorError::MatmulShape {
                left: self.shape.clone(),
                right: other.shape.clone(),
            });
        }
        let (p, q, r) = (self.shape[0], self.shape[1], other.shape[1]);
        let mut out = Self::zeros(&[p, r])?;
        unsafe {
            T::gemm(
                p,
                q,
                r,
                T::one(),
                self.data.as_ptr(),
                q as isize,
                1,
                other.data.as_ptr(),
                r as isize,
                1,
                T::zero(),
                out.data.as_mut_ptr(),
                r as isize,
                1,
            );
        }
        Ok(out)
    }

    /// Arithmetic mean over the listed axes; remaining axes keep their order.
    /// Reducing every axis yields a `[1]` tensor.
    pub fn reduce_mean(&self, axes: &[usize]) -> Result<Self, TensorError> {
        let rank = self.rank();
        let mut reduce = vec![false; rank];
        for &axis in axes {
            if axis >= rank {
                return Err(TensorError::InvalidAxis { axis, rank });
            }
            if reduce[axis] {
                return Err(TensorError::DuplicateAxis { axis });
            }
            reduce[axis] = true;
        }
        let kept: Vec<usize> =
            (0..rank).filter(|&a| !reduce[a]).map(|a| self.shape[a]).collect();
        let out_shape = if kept.is_empty() { vec![1] } else { kept };
        let mut out = Self::zeros(&out_shape)?;

        // Walk the input once in row-major order, accumulating into the
        // output slot addressed by the kept axes.
        let strides = self.strides();
        let mut out_strides = vec![0usize; rank];
        let mut acc = 1usize;
        for a in (0..rank).rev() {
            if !reduce[a] {
                out_strides[a] = acc;
                acc *= self.shape[a];
            }
        }
        for (flat, &v) in self.data.iter().enumerate() {
            let mut out_flat = 0;
            for a in 0..rank {
                if !reduce[a] {
                    out_flat += ((flat / strides[a]) % self.shape[a]) * out_strides[a];
                }
            }
            out.data[out_flat] = out.data[out_flat] + v;
        }
        let count = T::from_f64(
            (0..rank).filter(|&a| reduce[a]).map(|a| self.shape[a]).product::<usize>() as f64,
        );
        for v in &mut out.data {
            *v = *v / count;
        }
        Ok(out)
    }

    /// Transpose of a rank-2 tensor.
    pub fn transpose2(&self) -> Result<Self, TensorError> {
        if self.rank() != 2 {
            return Err(TensorError::MatmulShape {
                left: self.shape.clone(),
                right: vec![],
            });
        }
        let (rows, cols) = (self.shape[0], self.shape[1]);
        let mut out = Self::zeros(&[cols, rows])?;
        for r in 0..rows {
            for c in 0..cols {
                out.data[c * rows + r] = self.data[r * cols + c];
            }
        }
        Ok(out)
    }

    /// Dot product of same-shape tensors, accumulated in the element type.
    pub fn dot(&self, other: &Self) -> Result<T, TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch {
                left: self.shape.clone(),
                right: other.shape.clone(),
            });
        }
        let mut acc = T::zero();
        for (&a, &b) in self.data.iter().zip(&other.data) {
            acc = acc + a * b;
        }
        Ok(acc)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }
}

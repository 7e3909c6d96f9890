//! Reverse-mode automatic differentiation over dense matrices.
//!
//! A [`Tape`] is a Wengert list: forward operations append nodes holding the
//! materialized result, and [`Tape::backward`] replays the list in reverse,
//! accumulating exact analytic partials into every node. Values are handles
//! into the tape; construction order is topological by design, so the
//! reverse sweep needs no explicit sorting.
//!
//! Gradients accumulate additively across reuse of a value. Shape mismatches
//! panic with the offending operation's name.

use super::mat::Mat;

/// Handle to a node on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Value(usize);

#[derive(Debug)]
enum Op {
    Input,
    Add(Value, Value),
    Sub(Value, Value),
    Hadamard(Value, Value),
    /// alpha * x + beta, elementwise.
    AffineScalar { x: Value, alpha: f64 },
    Matmul(Value, Value),
    /// a @ bᵀ.
    MatmulNt(Value, Value),
    Tanh(Value),
    Sigmoid(Value),
    Relu(Value),
    Softplus(Value),
    Exp(Value),
    Sin(Value),
    /// Mean squared error over all entries of two same-shape matrices; 1×1 result.
    Mse(Value, Value),
    StackRows(Vec<Value>),
    SliceRows { x: Value, r0: usize },
    SliceCols { x: Value, c0: usize },
    ConcatCols(Value, Value),
    /// x (n×d) + row (1×d) added to every row.
    AddRowBroadcast { x: Value, row: Value },
    /// x scaled elementwise by a 1×1 value.
    ScaleByScalar { x: Value, s: Value },
    /// x plus a 1×1 value, elementwise.
    AddScalar { x: Value, s: Value },
    /// Row i of x (n×d) scaled by s[i] (n×1).
    ScaleRows { x: Value, s: Value },
}

struct Node {
    op: Op,
    data: Mat,
    grad: Option<Mat>,
}

#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

pub fn softplus_scalar(x: f64) -> f64 {
    // max(x,0) + ln(1+e^{-|x|}) avoids overflow for large |x|
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

pub fn sigmoid_scalar(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl Tape {
    pub fn new() -> Self {
        Tape { nodes: Vec::new() }
    }

    pub fn with_capacity(n: usize) -> Self {
        Tape { nodes: Vec::with_capacity(n) }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, op: Op, data: Mat) -> Value {
        self.nodes.push(Node { op, data, grad: None });
        Value(self.nodes.len() - 1)
    }

    pub fn value(&self, v: Value) -> &Mat {
        &self.nodes[v.0].data
    }

    /// Gradient of the last `backward` loss w.r.t. `v`.
    pub fn grad(&self, v: Value) -> &Mat {
        self.nodes[v.0].grad.as_ref().expect("grad: backward() has not been run")
    }

    // ── Leaves ──────────────────────────────────────────────────────────

    pub fn input(&mut self, m: Mat) -> Value {
        self.push(Op::Input, m)
    }

    pub fn scalar_input(&mut self, v: f64) -> Value {
        self.input(Mat::scalar(v))
    }

    // ── Forward ops ─────────────────────────────────────────────────────

    pub fn add(&mut self, a: Value, b: Value) -> Value {
        let data = {
            let (ma, mb) = (self.value(a), self.value(b));
            assert!(ma.same_shape(mb), "add: {}x{} vs {}x{}", ma.rows(), ma.cols(), mb.rows(), mb.cols());
            ma.add(mb)
        };
        self.push(Op::Add(a, b), data)
    }

    pub fn sub(&mut self, a: Value, b: Value) -> Value {
        let data = {
            let (ma, mb) = (self.value(a), self.value(b));
            assert!(ma.same_shape(mb), "sub: {}x{} vs {}x{}", ma.rows(), ma.cols(), mb.rows(), mb.cols());
            ma.sub(mb)
        };
        self.push(Op::Sub(a, b), data)
    }

    pub fn hadamard(&mut self, a: Value, b: Value) -> Value {
        let data = {
            let (ma, mb) = (self.value(a), self.value(b));
            assert!(ma.same_shape(mb), "hadamard: {}x{} vs {}x{}", ma.rows(), ma.cols(), mb.rows(), mb.cols());
            ma.hadamard(mb)
        };
        self.push(Op::Hadamard(a, b), data)
    }

    /// alpha * x + beta, elementwise (beta enters as a constant shift).
    pub fn affine(&mut self, x: Value, alpha: f64, beta: f64) -> Value {
        let data = self.value(x).map(|v| alpha * v + beta);
        self.push(Op::AffineScalar { x, alpha }, data)
    }

    pub fn neg(&mut self, x: Value) -> Value {
        self.affine(x, -1.0, 0.0)
    }

    /// 1 - x, elementwise (the GRU convex-combination weight).
    pub fn one_minus(&mut self, x: Value) -> Value {
        self.affine(x, -1.0, 1.0)
    }

    pub fn matmul(&mut self, a: Value, b: Value) -> Value {
        let data = {
            let (ma, mb) = (self.value(a), self.value(b));
            assert_eq!(ma.cols(), mb.rows(), "matmul: {}x{} @ {}x{}", ma.rows(), ma.cols(), mb.rows(), mb.cols());
            ma.matmul(mb)
        };
        self.push(Op::Matmul(a, b), data)
    }

    /// a @ bᵀ — the workhorse for row-vector states against (out×in) weights.
    pub fn matmul_nt(&mut self, a: Value, b: Value) -> Value {
        let data = {
            let (ma, mb) = (self.value(a), self.value(b));
            assert_eq!(ma.cols(), mb.cols(), "matmul_nt: {}x{} @ ({}x{})ᵀ", ma.rows(), ma.cols(), mb.rows(), mb.cols());
            ma.matmul_nt(mb)
        };
        self.push(Op::MatmulNt(a, b), data)
    }

    pub fn tanh(&mut self, x: Value) -> Value {
        let data = self.value(x).map(f64::tanh);
        self.push(Op::Tanh(x), data)
    }

    pub fn sigmoid(&mut self, x: Value) -> Value {
        let data = self.value(x).map(sigmoid_scalar);
        self.push(Op::Sigmoid(x), data)
    }

    pub fn relu(&mut self, x: Value) -> Value {
        let data = self.value(x).map(|v| v.max(0.0));
        self.push(Op::Relu(x), data)
    }

    pub fn softplus(&mut self, x: Value) -> Value {
        let data = self.value(x).map(softplus_scalar);
        self.push(Op::Softplus(x), data)
    }

    pub fn exp(&mut self, x: Value) -> Value {
        let data = self.value(x).map(f64::exp);
        self.push(Op::Exp(x), data)
    }

    pub fn sin(&mut self, x: Value) -> Value {
        let data = self.value(x).map(f64::sin);
        self.push(Op::Sin(x), data)
    }

    /// Mean over all entries of the squared difference; returns a 1×1 value.
    pub fn mse(&mut self, a: Value, b: Value) -> Value {
        let data = {
            let (ma, mb) = (self.value(a), self.value(b));
            assert!(ma.same_shape(mb), "mse: {}x{} vs {}x{}", ma.rows(), ma.cols(), mb.rows(), mb.cols());
            let n = ma.len() as f64;
            let s: f64 = ma.data().iter().zip(mb.data()).map(|(&x, &y)| (x - y) * (x - y)).sum();
            Mat::scalar(s / n)
        };
        self.push(Op::Mse(a, b), data)
    }

    /// Stack 1×d (or n×d) pieces vertically into one matrix.
    pub fn stack_rows(&mut self, parts: &[Value]) -> Value {
        assert!(!parts.is_empty(), "stack_rows of nothing");
        let data = {
            let mats: Vec<&Mat> = parts.iter().map(|&v| self.value(v)).collect();
            Mat::vstack(&mats)
        };
        self.push(Op::StackRows(parts.to_vec()), data)
    }

    pub fn slice_rows(&mut self, x: Value, r0: usize, r1: usize) -> Value {
        let data = self.value(x).slice_rows(r0, r1);
        self.push(Op::SliceRows { x, r0 }, data)
    }

    pub fn slice_cols(&mut self, x: Value, c0: usize, c1: usize) -> Value {
        let data = self.value(x).slice_cols(c0, c1);
        self.push(Op::SliceCols { x, c0 }, data)
    }

    pub fn concat_cols(&mut self, a: Value, b: Value) -> Value {
        let data = {
            let (ma, mb) = (self.value(a), self.value(b));
            assert_eq!(ma.rows(), mb.rows(), "concat_cols: {} vs {} rows", ma.rows(), mb.rows());
            Mat::hstack(&[ma, mb])
        };
        self.push(Op::ConcatCols(a, b), data)
    }

    /// x (n×d) + row (1×d) added to every row of x.
    pub fn add_row_broadcast(&mut self, x: Value, row: Value) -> Value {
        let data = {
            let (mx, mr) = (self.value(x), self.value(row));
            assert_eq!(mr.rows(), 1, "add_row_broadcast: bias must be 1×d");
            assert_eq!(mx.cols(), mr.cols(), "add_row_broadcast: {} vs {} cols", mx.cols(), mr.cols());
            let mut out = mx.clone();
            for i in 0..out.rows() {
                let cols = out.cols();
                for j in 0..cols {
                    let v = out.get(i, j) + mr.get(0, j);
                    out.set(i, j, v);
                }
            }
            out
        };
        self.push(Op::AddRowBroadcast { x, row }, data)
    }

    /// x scaled elementwise by a 1×1 tape value.
    pub fn scale_by(&mut self, x: Value, s: Value) -> Value {
        let data = {
            assert_eq!(self.value(s).len(), 1, "scale_by: scale must be 1×1");
            let sv = self.value(s).item();
            self.value(x).scale(sv)
        };
        self.push(Op::ScaleByScalar { x, s }, data)
    }

    /// x plus a 1×1 tape value, elementwise.
    pub fn add_scalar(&mut self, x: Value, s: Value) -> Value {
        let data = {
            assert_eq!(self.value(s).len(), 1, "add_scalar: shift must be 1×1");
            let sv = self.value(s).item();
            self.value(x).map(|v| v + sv)
        };
        self.push(Op::AddScalar { x, s }, data)
    }

    /// Row i of x (n×d) scaled by s[i] (n×1).
    pub fn scale_rows(&mut self, x: Value, s: Value) -> Value {
        let data = {
            let (mx, ms) = (self.value(x), self.value(s));
            assert_eq!(ms.cols(), 1, "scale_rows: scales must be n×1");
            assert_eq!(mx.rows(), ms.rows(), "scale_rows: {} vs {} rows", mx.rows(), ms.rows());
            let mut out = mx.clone();
            for i in 0..out.rows() {
                let sv = ms.get(i, 0);
                let cols = out.cols();
                for j in 0..cols {
                    out.set(i, j, out.get(i, j) * sv);
                }
            }
            out
        };
        self.push(Op::ScaleRows { x, s }, data)
    }

    // ── Backward ────────────────────────────────────────────────────────

    fn add_grad(&mut self, v: Value, contrib: Mat) {
        let node = &mut self.nodes[v.0];
        match &mut node.grad {
            Some(g) => g.axpy(1.0, &contrib),
            None => node.grad = Some(contrib),
        }
    }

    /// Reverse sweep from a scalar loss. Every reachable node's grad then
    /// holds ∂loss/∂node; the loss node's own grad is exactly 1.
    pub fn backward(&mut self, loss: Value) {
        assert_eq!(self.value(loss).len(), 1, "backward: loss must be a 1×1 scalar node");
        for node in &mut self.nodes {
            node.grad = None;
        }
        self.nodes[loss.0].grad = Some(Mat::scalar(1.0));

        for id in (0..=loss.0).rev() {
            let g = match self.nodes[id].grad.take() {
                Some(g) => g,
                None => continue, // not on any path to the loss
            };
            match &self.nodes[id].op {
                Op::Input => {}
                Op::Add(a, b) => {
                    let (a, b) = (*a, *b);
                    self.add_grad(a, g.clone());
                    self.add_grad(b, g.clone());
                }
                Op::Sub(a, b) => {
                    let (a, b) = (*a, *b);
                    self.add_grad(a, g.clone());
                    self.add_grad(b, g.scale(-1.0));
                }
                Op::Hadamard(a, b) => {
                    let (a, b) = (*a, *b);
                    let da = g.hadamard(self.value(b));
                    let db = g.hadamard(self.value(a));
                    self.add_grad(a, da);
                    self.add_grad(b, db);
                }
                Op::AffineScalar { x, alpha } => {
                    let (x, alpha) = (*x, *alpha);
                    self.add_grad(x, g.scale(alpha));
                }
                Op::Matmul(a, b) => {
                    let (a, b) = (*a, *b);
                    let da = g.matmul_nt(self.value(b));
                    let db = self.value(a).matmul_tn(&g);
                    self.add_grad(a, da);
                    self.add_grad(b, db);
                }
                Op::MatmulNt(a, b) => {
                    let (a, b) = (*a, *b);
                    let da = g.matmul(self.value(b));
                    let db = g.matmul_tn(self.value(a));
                    self.add_grad(a, da);
                    self.add_grad(b, db);
                }
                Op::Tanh(x) => {
                    let x = *x;
                    let dx = self.nodes[id].data.zip_map(&g, |y, gv| (1.0 - y * y) * gv);
                    self.add_grad(x, dx);
                }
                Op::Sigmoid(x) => {
                    let x = *x;
                    let dx = self.nodes[id].data.zip_map(&g, |y, gv| y * (1.0 - y) * gv);
                    self.add_grad(x, dx);
                }
                Op::Relu(x) => {
                    let x = *x;
                    let dx = self.value(x).zip_map(&g, |v, gv| if v > 0.0 { gv } else { 0.0 });
                    self.add_grad(x, dx);
                }
                Op::Softplus(x) => {
                    let x = *x;
                    let dx = self.value(x).zip_map(&g, |v, gv| sigmoid_scalar(v) * gv);
                    self.add_grad(x, dx);
                }
                Op::Exp(x) => {
                    let x = *x;
                    let dx = self.nodes[id].data.hadamard(&g);
                    self.add_grad(x, dx);
                }
                Op::Sin(x) => {
                    let x = *x;
                    let dx = self.value(x).zip_map(&g, |v, gv| v.cos() * gv);
                    self.add_grad(x, dx);
                }
                Op::Mse(a, b) => {
                    let (a, b) = (*a, *b);
                    let scale = 2.0 * g.item() / self.value(a).len() as f64;
                    let diff = self.value(a).sub(self.value(b));
                    self.add_grad(a, diff.scale(scale));
                    self.add_grad(b, diff.scale(-scale));
                }
                Op::StackRows(parts) => {
                    let parts = parts.clone();
                    let mut r = 0;
                    for p in parts {
                        let rows = self.value(p).rows();
                        let chunk = g.slice_rows(r, r + rows);
                        r += rows;
                        self.add_grad(p, chunk);
                    }
                }
                Op::SliceRows { x, r0 } => {
                    let (x, r0) = (*x, *r0);
                    let src = self.value(x);
                    let mut dx = Mat::zeros(src.rows(), src.cols());
                    for i in 0..g.rows() {
                        for j in 0..g.cols() {
                            dx.set(r0 + i, j, g.get(i, j));
                        }
                    }
                    self.add_grad(x, dx);
                }
                Op::SliceCols { x, c0 } => {
                    let (x, c0) = (*x, *c0);
                    let src = self.value(x);
                    let mut dx = Mat::zeros(src.rows(), src.cols());
                    for i in 0..g.rows() {
                        for j in 0..g.cols() {
                            dx.set(i, c0 + j, g.get(i, j));
                        }
                    }
                    self.add_grad(x, dx);
                }
                Op::ConcatCols(a, b) => {
                    let (a, b) = (*a, *b);
                    let ca = self.value(a).cols();
                    let da = g.slice_cols(0, ca);
                    let db = g.slice_cols(ca, g.cols());
                    self.add_grad(a, da);
                    self.add_grad(b, db);
                }
                Op::AddRowBroadcast { x, row } => {
                    let (x, row) = (*x, *row);
                    let mut drow = Mat::zeros(1, g.cols());
                    for i in 0..g.rows() {
                        for j in 0..g.cols() {
                            drow.set(0, j, drow.get(0, j) + g.get(i, j));
                        }
                    }
                    self.add_grad(x, g.clone());
                    self.add_grad(row, drow);
                }
                Op::ScaleByScalar { x, s } => {
                    let (x, s) = (*x, *s);
                    let sv = self.value(s).item();
                    let ds: f64 = g.data().iter().zip(self.value(x).data()).map(|(&gv, &xv)| gv * xv).sum();
                    self.add_grad(x, g.scale(sv));
                    self.add_grad(s, Mat::scalar(ds));
                }
                Op::AddScalar { x, s } => {
                    let (x, s) = (*x, *s);
                    let ds: f64 = g.data().iter().sum();
                    self.add_grad(x, g.clone());
                    self.add_grad(s, Mat::scalar(ds));
                }
                Op::ScaleRows { x, s } => {
                    let (x, s) = (*x, *s);
                    let mut dx = g.clone();
                    let mut ds = Mat::zeros(g.rows(), 1);
                    for i in 0..g.rows() {
                        let sv = self.value(s).get(i, 0);
                        let mut acc = 0.0;
                        for j in 0..g.cols() {
                            acc += g.get(i, j) * self.value(x).get(i, j);
                            let v = dx.get(i, j) * sv;
                            dx.set(i, j, v);
                        }
                        ds.set(i, 0, acc);
                    }
                    self.add_grad(x, dx);
                    self.add_grad(s, ds);
                }
            }
            self.nodes[id].grad = Some(g);
        }

        // Untouched leaves still expose a zero gradient.
        for node in &mut self.nodes {
            if node.grad.is_none() {
                node.grad = Some(Mat::zeros(node.data.rows(), node.data.cols()));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_at_zero_is_half() {
        let mut t = Tape::new();
        let x = t.scalar_input(0.0);
        let y = t.sigmoid(x);
        assert_eq!(t.value(y).item(), 0.5);
    }

    #[test]
    fn softplus_at_zero_is_ln2() {
        let mut t = Tape::new();
        let x = t.scalar_input(0.0);
        let y = t.softplus(x);
        assert!((t.value(y).item() - 0.6931471805599453).abs() < 1e-15);
    }

    #[test]
    fn mse_of_identical_inputs_is_zero() {
        let mut t = Tape::new();
        let a = t.input(Mat::row(&[1.0, 2.0]));
        let b = t.input(Mat::row(&[1.0, 2.0]));
        let l = t.mse(a, b);
        assert_eq!(t.value(l).item(), 0.0);
    }

    #[test]
    fn square_gradient_is_two_x() {
        // loss = x², x = 3 → grad = 6
        let mut t = Tape::new();
        let x = t.scalar_input(3.0);
        let l = t.hadamard(x, x);
        t.backward(l);
        assert_eq!(t.grad(x).item(), 6.0);
        assert_eq!(t.grad(l).item(), 1.0);
    }

    #[test]
    fn tanh_gradient_at_zero_is_one() {
        let mut t = Tape::new();
        let x = t.scalar_input(0.0);
        let l = t.tanh(x);
        t.backward(l);
        assert_eq!(t.grad(x).item(), 1.0);
    }

    #[test]
    fn gradients_accumulate_across_reuse() {
        // loss = x·x + x → dl/dx = 2x + 1
        let mut t = Tape::new();
        let x = t.scalar_input(1.5);
        let sq = t.hadamard(x, x);
        let l = t.add(sq, x);
        t.backward(l);
        assert!((t.grad(x).item() - 4.0).abs() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "loss must be a 1×1 scalar")]
    fn backward_rejects_non_scalar_loss() {
        let mut t = Tape::new();
        let x = t.input(Mat::row(&[1.0, 2.0]));
        t.backward(x);
    }

    #[test]
    #[should_panic(expected = "matmul")]
    fn matmul_names_the_op_on_shape_mismatch() {
        let mut t = Tape::new();
        let a = t.input(Mat::zeros(2, 3));
        let b = t.input(Mat::zeros(2, 3));
        t.matmul(a, b);
    }

    /// Central finite differences on a Wx-vs-target loss; this is the
    /// independent oracle for the matmul/mse backward path.
    #[test]
    fn linear_loss_matches_finite_differences() {
        let h = 1e-5;
        let w0 = [0.3, -0.7, 1.1, 0.4, -0.2, 0.9];
        let x0 = [0.5, -1.2, 0.8];
        let target = [0.25, -0.75];

        let eval = |w: &[f64]| -> f64 {
            let mut t = Tape::new();
            let w = t.input(Mat::from_vec(2, 3, w.to_vec()));
            let x = t.input(Mat::col(&x0));
            let tgt = t.input(Mat::col(&target));
            let y = t.matmul(w, x);
            let l = t.mse(y, tgt);
            t.value(l).item()
        };

        let mut t = Tape::new();
        let w = t.input(Mat::from_vec(2, 3, w0.to_vec()));
        let x = t.input(Mat::col(&x0));
        let tgt = t.input(Mat::col(&target));
        let y = t.matmul(w, x);
        let l = t.mse(y, tgt);
        t.backward(l);

        for k in 0..6 {
            let mut wp = w0;
            let mut wm = w0;
            wp[k] += h;
            wm[k] -= h;
            let fd = (eval(&wp) - eval(&wm)) / (2.0 * h);
            let an = t.grad(w).data()[k];
            let rel = (an - fd).abs() / fd.abs().max(1e-8);
            assert!(rel < 1e-4, "param {k}: analytic {an} vs fd {fd}");
        }
    }
}

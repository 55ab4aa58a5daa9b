//! Radially symmetric quasi-static nutrient from the sharp-interface
//! limit: constant in the necrotic core, a combination of `I0` and `K0` in
//! the proliferating annulus and `a + b ln r` in the host.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn power_series(x: f64, order: u32) -> f64 {
    // sum_k (x^2/4)^k / (k! (k+order)!) times (x/2)^order
    let q = 0.25 * x * x;
    let mut term = 1.0;
    for j in 1..=order {
        term *= 0.5 * x / j as f64;
    }
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + order as f64));
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

fn asymptotic_i(x: f64, order: u32) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        let next = -term * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x.exp() / (2.0 * std::f64::consts::PI * x).sqrt() * sum
}

/// Modified Bessel function of the first kind, order 0.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 20.0 {
        power_series(x, 0)
    } else {
        asymptotic_i(x, 0)
    }
}

/// Modified Bessel function of the first kind, order 1.
pub fn bessel_i1(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    s * if x <= 20.0 { power_series(x, 1) } else { asymptotic_i(x, 1) }
}

/// `(K0(x), K1(x))` for `x > 0`.
pub fn bessel_k0_k1(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("K0 and K1 need x > 0, got {x}")));
    }
    if x <= 2.0 {
        Ok(k_series(x))
    } else {
        Ok(k_continued_fraction(x))
    }
}

/// `K0(x)` for `x > 0`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k0_k1(x).map(|k| k.0)
}

/// `K1(x)` for `x > 0`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    bessel_k0_k1(x).map(|k| k.1)
}

/// `(I0(x), K0(x))`.
pub fn bessel_i0_k0(x: f64) -> Result<(f64, f64)> {
    Ok((bessel_i0(x), bessel_k0(x)?))
}

fn k_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let l = (0.5 * x).ln();
    // psi(k+1) = -gamma + H_k
    let mut psi = -EULER_GAMMA;
    let mut t0 = 1.0; // q^k / (k!)^2
    let mut t1 = 1.0; // q^k / (k! (k+1)!)
    let mut k0 = psi * t0;
    let mut psi_next = psi + 1.0;
    let mut k1 = (psi + psi_next) * t1;
    let mut k = 1.0;
    loop {
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        psi = psi_next;
        psi_next = psi + 1.0 / (k + 1.0);
        let d0 = psi * t0;
        let d1 = (psi + psi_next) * t1;
        k0 += d0;
        k1 += d1;
        if t0 < 1e-18 {
            break;
        }
        k += 1.0;
    }
    let i0 = power_series(x, 0);
    let i1 = power_series(x, 1);
    (-l * i0 + k0, 1.0 / x + l * i1 - 0.25 * x * k1)
}

/// Steed's continued fraction for `K0`, with `K1` from the same recurrence.
fn k_continued_fraction(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Closed-form radial nutrient profile for frozen interfaces at `R3 < R2`
/// inside the disc of radius `R_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialNutrientProfile {
    pub r3: f64,
    pub r2: f64,
    pub r_out: f64,
    pub consumption: f64,
    pub sigma_b: f64,
    /// Value in the core `r < R3`.
    pub sigma_core: f64,
    /// Coefficients of `I0(k r)` and `K0(k r)` on `(R3, R2)`, `k = sqrt(C)`.
    pub c1: f64,
    pub c2: f64,
    /// Coefficients of `a + b ln r` on `(R2, R_out)`.
    pub a: f64,
    pub b: f64,
}

/// Solves the four matching conditions (no flux at `R3`, value and flux
/// continuity at `R2`, Dirichlet data at `R_out`).
pub fn solve_radial(r3: f64, r2: f64, r_out: f64, consumption: f64, sigma_b: f64) -> Result<RadialNutrientProfile> {
    if !(r3 > 0.0 && r3 < r2 && r2 < r_out && r_out.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 < R3 < R2 < R_out, got {r3}, {r2}, {r_out}")));
    }
    if !(consumption >= 0.0) || !(sigma_b >= 0.0) {
        return Err(Error::InvalidArgument("consumption and boundary value must be nonnegative".into()));
    }
    if consumption == 0.0 {
        return Ok(RadialNutrientProfile {
            r3,
            r2,
            r_out,
            consumption,
            sigma_b,
            sigma_core: sigma_b,
            c1: sigma_b,
            c2: 0.0,
            a: sigma_b,
            b: 0.0,
        });
    }
    let k = consumption.sqrt();
    let (k0_3, k1_3) = bessel_k0_k1(k * r3)?;
    let (k0_2, k1_2) = bessel_k0_k1(k * r2)?;
    let (i0_2, i1_2, i1_3) = (bessel_i0(k * r2), bessel_i1(k * r2), bessel_i1(k * r3));
    let mut m = [
        [k * i1_3, -k * k1_3, 0.0, 0.0, 0.0],
        [i0_2, k0_2, -1.0, -r2.ln(), 0.0],
        [k * i1_2, -k * k1_2, 0.0, -1.0 / r2, 0.0],
        [0.0, 0.0, 1.0, r_out.ln(), sigma_b],
    ];
    let x = gauss4(&mut m)?;
    let (c1, c2, a, b) = (x[0], x[1], x[2], x[3]);
    let sigma_core = c1 * bessel_i0(k * r3) + c2 * k0_3;
    Ok(RadialNutrientProfile { r3, r2, r_out, consumption, sigma_b, sigma_core, c1, c2, a, b })
}

fn gauss4(m: &mut [[f64; 5]; 4]) -> Result<[f64; 4]> {
    let mut scale = [0.0f64; 4];
    for (i, row) in m.iter().enumerate() {
        scale[i] = row[..4].iter().fold(0.0, |s, v| s.max(v.abs()));
    }
    let mut max_piv: f64 = 0.0;
    let mut min_piv = f64::INFINITY;
    for col in 0..4 {
        let p = (col..4)
            .max_by(|&i, &j| (m[i][col].abs() / scale[i]).total_cmp(&(m[j][col].abs() / scale[j])))
            .unwrap();
        m.swap(col, p);
        scale.swap(col, p);
        let piv = m[col][col].abs() / scale[col];
        max_piv = max_piv.max(piv);
        min_piv = min_piv.min(piv);
        if !(piv > 1e-13 * max_piv.max(1.0)) {
            return Err(Error::Singular(format!("radial matching system, pivot {piv:e}")));
        }
        for i in col + 1..4 {
            let l = m[i][col] / m[col][col];
            for j in col..5 {
                m[i][j] -= l * m[col][j];
            }
        }
    }
    let mut x = [0.0; 4];
    for i in (0..4).rev() {
        let mut s = m[i][4];
        for j in i + 1..4 {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    Ok(x)
}

impl RadialNutrientProfile {
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= self.r3 {
            self.sigma_core
        } else if r <= self.r2 {
            let k = self.consumption.sqrt();
            let k0 = if self.c2 == 0.0 { 0.0 } else { bessel_k0(k * r).unwrap_or(0.0) };
            self.c1 * bessel_i0(k * r) + self.c2 * k0
        } else {
            self.a + self.b * r.ln()
        }
    }

    /// Radial derivative.
    pub fn derivative(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= self.r3 || (r <= self.r2 && self.consumption == 0.0) {
            0.0
        } else if r <= self.r2 {
            let k = self.consumption.sqrt();
            self.c1 * k * bessel_i1(k * r) - self.c2 * k * bessel_k1(k * r).unwrap_or(0.0)
        } else {
            self.b / r
        }
    }

    /// Second radial derivative inside the annulus.
    pub fn annulus_second_derivative(&self, r: f64) -> f64 {
        // sigma'' = C sigma - sigma'/r
        self.consumption * self.eval(r) - self.derivative(r) / r
    }
}

//! Directed rounding from round-to-nearest results.
//!
//! Each helper computes the nearest result and an exact residual (TwoSum for
//! addition, FMA for multiplication, division and square root), then steps
//! one ulp outward only when the residual shows the nearest result lies on
//! the wrong side of the exact value. The residual arguments are exact only
//! while magnitudes stay inside `[TINY, HUGE]`; outside that window the
//! helpers step unconditionally, which the half-ulp nearest error always
//! makes sound.

const HUGE: f64 = 1e300;
const TINY: f64 = 1e-250;

#[inline]
fn tight(x: f64) -> bool {
    let a = x.abs();
    a > TINY && a < HUGE
}

#[inline]
pub fn add_dir(a: f64, b: f64, up: bool) -> f64 {
    let s = a + b;
    if !(s.is_finite() && a.abs() < HUGE && b.abs() < HUGE) {
        return if up { s.next_up() } else { s.next_down() };
    }
    // Knuth TwoSum: err is the exact rounding error of s = fl(a + b).
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if up {
        if err > 0.0 {
            s.next_up()
        } else {
            s
        }
    } else if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn sub_dir(a: f64, b: f64, up: bool) -> f64 {
    add_dir(a, -b, up)
}

#[inline]
pub fn mul_dir(a: f64, b: f64, up: bool) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !(tight(p) && a.abs() < HUGE && b.abs() < HUGE) {
        return if up { p.next_up() } else { p.next_down() };
    }
    // a*b - p is exactly representable while p is comfortably normal
    let err = a.mul_add(b, -p);
    if up {
        if err > 0.0 {
            p.next_up()
        } else {
            p
        }
    } else if err < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn div_dir(a: f64, b: f64, up: bool) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    if !(tight(q) && tight(a) && tight(b)) {
        return if up { q.next_up() } else { q.next_down() };
    }
    // sign(q - a/b) = sign(q*b - a) * sign(b); in the tight window the FMA
    // residual cannot flush to zero unless q*b == a exactly.
    let r = q.mul_add(b, -a);
    if r == 0.0 {
        return q;
    }
    let above = (r > 0.0) == (b > 0.0);
    if up {
        if above {
            q
        } else {
            q.next_up()
        }
    } else if above {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub fn sqrt_dir(x: f64, up: bool) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    if !(tight(s) && tight(x)) {
        return if up { s.next_up() } else { s.next_down() };
    }
    let r = s.mul_add(s, -x); // sign of s - sqrt(x)
    if r == 0.0 {
        return s; // s*s == x exactly
    }
    if up {
        if r > 0.0 {
            s
        } else {
            s.next_up()
        }
    } else if r > 0.0 {
        s.next_down()
    } else {
        s
    }
}

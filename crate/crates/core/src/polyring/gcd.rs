use super::poly::MultiPoly;

fn trim(v: &mut Vec<MultiPoly>) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

fn is_zero_vec(v: &[MultiPoly]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// `lc(b)^(deg a - deg b + 1) a mod b` as polynomials in one variable.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut r: Vec<MultiPoly> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    let mut steps = (r.len() - 1 + 1).saturating_sub(db);
    while !is_zero_vec(&r) && r.len() > db {
        steps -= 1;
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (k, bk) in b.iter().enumerate() {
            let idx = dr - db + k;
            r[idx] = &r[idx] - &(&lr * bk);
        }
        r.pop();
        trim(&mut r);
    }
    if !is_zero_vec(&r) {
        for _ in 0..steps {
            for c in r.iter_mut() {
                *c = &*c * lb;
            }
        }
    }
    r
}

fn pow(p: &MultiPoly, e: usize) -> MultiPoly {
    (0..e).fold(MultiPoly::one(p.ring()), |acc, _| &acc * p)
}

fn content(coeffs: &[MultiPoly]) -> MultiPoly {
    let mut g = MultiPoly::zero(coeffs[0].ring());
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(coeffs: &[MultiPoly]) -> Vec<MultiPoly> {
    let c = content(coeffs);
    if c.is_zero() {
        return coeffs.to_vec();
    }
    coeffs.iter().map(|x| x.div_exact(&c).expect("content divides")).collect()
}

/// Greatest common divisor with leading coefficient 1; `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_unit() || b.is_unit() {
        return MultiPoly::one(a.ring());
    }
    let n = a.ring().nvars();
    let var = (0..n).find(|&v| a.degree_in(v).unwrap_or(0) > 0 || b.degree_in(v).unwrap_or(0) > 0);
    let Some(v) = var else {
        return MultiPoly::one(a.ring());
    };
    let da = a.degree_in(v).unwrap_or(0);
    let db = b.degree_in(v).unwrap_or(0);
    if da == 0 {
        return gcd(a, &content(&b.coeffs_in(v)));
    }
    if db == 0 {
        return gcd(&content(&a.coeffs_in(v)), b);
    }
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    let ac = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let cont = gcd(&content(&ac), &content(&bc));
    let (mut p, mut q) = (primitive(&ac), primitive(&bc));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    // subresultant sequence
    let one = MultiPoly::one(a.ring());
    let (mut g, mut h) = (one.clone(), one.clone());
    let g = loop {
        let delta = p.len() - q.len();
        let r = prem(&p, &q);
        if is_zero_vec(&r) {
            break q;
        }
        if r.len() == 1 {
            break vec![one];
        }
        let divisor = &g * &pow(&h, delta);
        p = q;
        q = r.iter().map(|c| c.div_exact(&divisor).expect("subresultant division")).collect();
        g = p.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            pow(&g, delta).div_exact(&pow(&h, delta - 1)).expect("subresultant division")
        };
    };
    let g = MultiPoly::from_coeffs_in(a.ring(), v, &primitive(&g));
    (&g * &cont).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, PolyRing};

    #[test]
    fn bivariate_gcd() {
        let r = PolyRing::new(&["x", "y"], &[1, 1], 0).unwrap();
        let a = parse_poly(&r, "(x + y)^2*(x - 2*y)").unwrap();
        let b = parse_poly(&r, "(x + y)*(x^2 + 3*y)").unwrap();
        assert_eq!(gcd(&a, &b), parse_poly(&r, "x + y").unwrap());
    }

    #[test]
    fn coprime() {
        let r = PolyRing::new(&["x", "y", "z"], &[1, 2, 3], 0).unwrap();
        let a = parse_poly(&r, "x*y + z").unwrap();
        let b = parse_poly(&r, "x^3 - y").unwrap();
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn char_p_gcd() {
        let r = PolyRing::new(&["x"], &[1], 5).unwrap();
        let a = parse_poly(&r, "x^2 - 1").unwrap();
        let b = parse_poly(&r, "x^2 + 3*x + 2").unwrap();
        assert_eq!(gcd(&a, &b), parse_poly(&r, "x + 1").unwrap());
    }
}

//! Independent reference implementations used as test oracles. None of
//! these call into the library code they check.

#![allow(dead_code)]

use std::collections::VecDeque;

/// Every assignment of `tiles` symbols to an `h`×`w` grid that satisfies
/// `allowed(a, dir, b)`, where dir 0 = east neighbour, 1 = south neighbour.
pub fn enumerate_tilings(tiles: u8, w: usize, h: usize, allowed: &dyn Fn(u8, usize, u8) -> bool) -> Vec<Vec<u8>> {
    let n = w * h;
    let mut out = Vec::new();
    let mut grid = vec![0u8; n];
    fn rec(i: usize, n: usize, w: usize, tiles: u8, grid: &mut Vec<u8>, allowed: &dyn Fn(u8, usize, u8) -> bool, out: &mut Vec<Vec<u8>>) {
        if i == n {
            out.push(grid.clone());
            return;
        }
        let (r, c) = (i / w, i % w);
        for t in 0..tiles {
            if c > 0 && !allowed(grid[i - 1], 0, t) {
                continue;
            }
            if r > 0 && !allowed(grid[i - w], 1, t) {
                continue;
            }
            grid[i] = t;
            rec(i + 1, n, w, tiles, grid, allowed, out);
        }
    }
    rec(0, n, w, tiles, &mut grid, allowed, &mut out);
    out
}

/// 4-connected components of cells where `filled` is true, as sorted
/// (row, col) lists, in order of their first cell.
pub fn flood_components(h: usize, w: usize, filled: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<(usize, usize)>> {
    let mut seen = vec![false; h * w];
    let mut comps = Vec::new();
    for r0 in 0..h {
        for c0 in 0..w {
            if seen[r0 * w + c0] || !filled(r0, c0) {
                continue;
            }
            let mut comp = Vec::new();
            let mut q = VecDeque::from([(r0, c0)]);
            seen[r0 * w + c0] = true;
            while let Some((r, c)) = q.pop_front() {
                comp.push((r, c));
                let nbrs = [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)];
                for (nr, nc) in nbrs {
                    if nr < h && nc < w && !seen[nr * w + nc] && filled(nr, nc) {
                        seen[nr * w + nc] = true;
                        q.push_back((nr, nc));
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
    }
    comps
}

/// Empty cells of an `h`×`w` box not reachable from outside the box.
pub fn enclosed_empty_cells(h: usize, w: usize, building: &dyn Fn(usize, usize) -> bool) -> usize {
    // Pad by one ring of outside cells, flood from the corner.
    let (ph, pw) = (h + 2, w + 2);
    let solid = |r: usize, c: usize| r >= 1 && c >= 1 && r <= h && c <= w && building(r - 1, c - 1);
    let outside = flood_components(ph, pw, &|r, c| !solid(r, c));
    let reach = outside.iter().find(|comp| comp.contains(&(0, 0))).map_or(0, |c| c.len());
    let empty_total = ph * pw - (0..h).flat_map(|r| (0..w).map(move |c| (r, c))).filter(|&(r, c)| building(r, c)).count();
    empty_total - reach
}

/// NOAA solar position (Julian-century form, no refraction) for local
/// standard time `local_hours` on a date in 2001.
pub fn noaa_sun(lat: f64, lon: f64, tz: f64, month: u32, day: u32, local_hours: f64) -> (f64, f64) {
    let (y, m) = if month <= 2 { (2000.0, month as f64 + 12.0) } else { (2001.0, month as f64) };
    let a = (y / 100.0f64).floor();
    let b = 2.0 - a + (a / 4.0).floor();
    let jd0 = (365.25 * (y + 4716.0)).floor() + (30.6001 * (m + 1.0)).floor() + day as f64 + b - 1524.5;
    let jd = jd0 + (local_hours - tz) / 24.0;
    let t = (jd - 2451545.0) / 36525.0;
    let l0 = (280.46646 + t * (36000.76983 + t * 0.0003032)).rem_euclid(360.0);
    let mean = 357.52911 + t * (35999.05029 - 0.0001537 * t);
    let e = 0.016708634 - t * (0.000042037 + 0.0000001267 * t);
    let mr = mean.to_radians();
    let c = mr.sin() * (1.914602 - t * (0.004817 + 0.000014 * t)) + (2.0 * mr).sin() * (0.019993 - 0.000101 * t) + (3.0 * mr).sin() * 0.000289;
    let omega = 125.04 - 1934.136 * t;
    let lambda = (l0 + c - 0.00569 - 0.00478 * omega.to_radians().sin()).to_radians();
    let eps0 = 23.0 + (26.0 + (21.448 - t * (46.815 + t * (0.00059 - t * 0.001813))) / 60.0) / 60.0;
    let eps = (eps0 + 0.00256 * omega.to_radians().cos()).to_radians();
    let decl = (eps.sin() * lambda.sin()).asin();
    let yy = (eps / 2.0).tan().powi(2);
    let l0r = l0.to_radians();
    let eot = 4.0
        * (yy * (2.0 * l0r).sin() - 2.0 * e * mr.sin() + 4.0 * e * yy * mr.sin() * (2.0 * l0r).cos()
            - 0.5 * yy * yy * (4.0 * l0r).sin()
            - 1.25 * e * e * (2.0 * mr).sin())
        .to_degrees();
    let tst = (local_hours * 60.0 + eot + 4.0 * lon - 60.0 * tz).rem_euclid(1440.0);
    let ha = tst / 4.0 - 180.0;
    let latr = lat.to_radians();
    let cosz = (latr.sin() * decl.sin() + latr.cos() * decl.cos() * ha.to_radians().cos()).clamp(-1.0, 1.0);
    let zen = cosz.acos();
    let altitude = 90.0 - zen.to_degrees();
    let x = ((latr.sin() * cosz - decl.sin()) / (latr.cos() * zen.sin())).clamp(-1.0, 1.0);
    let acos = x.acos().to_degrees();
    let azimuth = if ha > 0.0 { (acos + 180.0).rem_euclid(360.0) } else { (540.0 - acos).rem_euclid(360.0) };
    (altitude, azimuth)
}

/// Fanger PMV with the clothing surface temperature found by bisection on
/// the clothing heat balance. Magnus saturation pressure, Kelvin at 273.15.
pub fn pmv_bisection(ta: f64, tr: f64, vel: f64, rh: f64, met: f64, clo: f64) -> f64 {
    let m = met * 58.15;
    let icl = 0.155 * clo;
    let fcl = if icl <= 0.078 { 1.0 + 1.29 * icl } else { 1.05 + 0.645 * icl };
    let pa = rh / 100.0 * 610.94 * (17.625 * ta / (ta + 243.04)).exp();
    let k = 273.15;
    let hc = |tcl: f64| (2.38 * (tcl - ta).abs().powf(0.25)).max(12.1 * vel.sqrt());
    let rad = |tcl: f64| 3.96e-8 * fcl * ((tcl + k).powi(4) - (tr + k).powi(4));
    let balance = |tcl: f64| 35.7 - 0.028 * m - icl * (rad(tcl) + fcl * hc(tcl) * (tcl - ta)) - tcl;
    let (mut lo, mut hi) = (-40.0, 60.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tcl = 0.5 * (lo + hi);
    let load = m
        - 3.05e-3 * (5733.0 - 6.99 * m - pa)
        - 0.42 * (m - 58.15)
        - 1.7e-5 * m * (5867.0 - pa)
        - 0.0014 * m * (34.0 - ta)
        - rad(tcl)
        - fcl * hc(tcl) * (tcl - ta);
    (0.303 * (-0.036 * m).exp() + 0.028) * load
}

/// Published ISO 7730 validation cases: (ta, tr, var, rh, met, clo, pmv).
pub const ISO7730_CASES: [(f64, f64, f64, f64, f64, f64, f64); 12] = [
    (22.0, 22.0, 0.1, 60.0, 1.2, 0.5, -0.75),
    (27.0, 27.0, 0.1, 60.0, 1.2, 0.5, 0.77),
    (27.0, 27.0, 0.3, 60.0, 1.2, 0.5, 0.44),
    (23.5, 25.5, 0.1, 60.0, 1.2, 0.5, -0.01),
    (23.5, 25.5, 0.3, 60.0, 1.2, 0.5, -0.55),
    (19.0, 19.0, 0.1, 40.0, 1.2, 1.0, -0.60),
    (23.5, 23.5, 0.3, 40.0, 1.2, 1.0, 0.12),
    (23.0, 21.0, 0.1, 40.0, 1.2, 1.0, 0.05),
    (23.0, 21.0, 0.3, 40.0, 1.2, 1.0, -0.16),
    (22.0, 22.0, 0.1, 60.0, 1.6, 0.5, 0.05),
    (27.0, 27.0, 0.1, 60.0, 1.6, 0.5, 1.17),
    (27.0, 27.0, 0.3, 60.0, 1.6, 0.5, 0.95),
];

/// Linear zone coefficients for the Euler oracle.
pub struct Rc {
    pub capacitance: f64,
    /// W/K, conduction plus air exchange.
    pub conductance: f64,
    pub outdoor: f64,
    /// W of solar (after SHGC) plus internal gains.
    pub gains: f64,
}

/// 1-second explicit Euler over `seconds`.
pub fn euler_free(t0: f64, rc: &Rc, seconds: usize) -> f64 {
    let mut t = t0;
    for _ in 0..seconds {
        t += (rc.conductance * (rc.outdoor - t) + rc.gains) / rc.capacitance;
    }
    t
}

/// 1-second Euler with a proportional clamp: whenever a step would leave
/// `[heat, cool]`, the excess is charged to HVAC and the temperature is
/// put back on the setpoint. Returns (end temp, heating J, cooling J).
pub fn euler_clamped(t0: f64, rc: &Rc, seconds: usize, heat: f64, cool: f64) -> (f64, f64, f64) {
    let (mut t, mut h, mut c) = (t0, 0.0, 0.0);
    for _ in 0..seconds {
        t += (rc.conductance * (rc.outdoor - t) + rc.gains) / rc.capacitance;
        if t > cool {
            c += rc.capacitance * (t - cool);
            t = cool;
        } else if t < heat {
            h += rc.capacitance * (heat - t);
            t = heat;
        }
    }
    (t, h, c)
}

#!/usr/bin/env python3
"""Independent numerical oracle for the simulator's closed-form quantities.

Transcribes the four-edge screen diffraction formula, the UMi path-loss
curves, the LOS probability curve, noise power, and the front-end power
model directly from their definitions, with no code shared with the Rust
implementation. Run it to (re)generate the golden tables pasted into the
Rust test suite.
"""

import math

C0 = 299_792_458.0
KB = 1.380649e-23


# ---------------------------------------------------------------------------
# Screen diffraction (double knife-edge over a vertical rectangular screen)
# ---------------------------------------------------------------------------

def fresnel_term(delta, wavelength, shadowed):
    """F = atan(+/- (pi/2) sqrt((pi/lambda) * delta)) / pi."""
    arg = (math.pi / 2.0) * math.sqrt(max(delta, 0.0) * math.pi / wavelength)
    if not shadowed:
        arg = -arg
    return math.atan(arg) / math.pi


def knife_edge_loss_db(tx, rx, bx, by, width, height, wavelength):
    """Loss in dB for a grounded vertical screen centred at (bx, by).

    The screen faces the link: its plane is perpendicular to the horizontal
    Tx->Rx direction. Screens whose plane does not separate Tx from Rx
    contribute nothing.
    """
    txx, txy, txz = tx
    rxx, rxy, rxz = rx
    lx, ly = rxx - txx, rxy - txy
    d2d = math.hypot(lx, ly)
    if d2d < 1e-12:
        return 0.0
    ux, uy = lx / d2d, ly / d2d
    vx, vy = -uy, ux
    # along-track position of the screen plane and crossing parameter
    a_c = (bx - txx) * ux + (by - txy) * uy
    t = a_c / d2d
    if t < 0.0 or t > 1.0:
        return 0.0
    # crossing point of the direct ray in the screen plane
    cx, cy = txx + lx * t, txy + ly * t
    s_c = (cx - bx) * vx + (cy - by) * vy
    z_c = txz + (rxz - txz) * t

    half_w = width / 2.0

    # side edges: top view (horizontal plane)
    fw = 0.0
    for s_edge, shadowed in ((-half_w, s_c > -half_w), (half_w, s_c < half_w)):
        ex, ey = bx + vx * s_edge, by + vy * s_edge
        d1 = math.hypot(ex - txx, ey - txy)
        d2 = math.hypot(rxx - ex, rxy - ey)
        fw += fresnel_term(d1 + d2 - d2d, wavelength, shadowed)

    # top/bottom edges: side view (vertical plane through the link)
    r_side = math.hypot(d2d, rxz - txz)
    fh = 0.0
    for z_edge, shadowed in ((height, z_c < height), (0.0, z_c > 0.0)):
        d1 = math.hypot(a_c, z_edge - txz)
        d2 = math.hypot(d2d - a_c, rxz - z_edge)
        fh += fresnel_term(d1 + d2 - r_side, wavelength, shadowed)

    inner = 1.0 - fh * fw
    if inner <= 0.0:
        return 400.0  # total extinction; not reachable with four atan terms
    return max(-20.0 * math.log10(inner), 0.0)


HUMAN = (0.3, 1.7)      # width, height
VEHICLE = (4.8, 1.4)

LAMBDA_28 = C0 / 28e9
LAMBDA_140 = C0 / 140e9


def golden_geometries():
    """Ten frozen geometries exercised at both bands (20 rows)."""
    g = []
    # 1. human centred on a low 20 m link, midpoint
    g.append(("human mid low link", (-10, 0, 1.5), (10, 0, 1.5), (0, 0), HUMAN))
    # 2. same link, blocker 0.1 m lateral
    g.append(("human off-centre", (-10, 0, 1.5), (10, 0, 1.5), (0, 0.1), HUMAN))
    # 3. human clipping the top edge (ray at 1.65 m)
    g.append(("human grazing top", (-10, 0, 1.65), (10, 0, 1.65), (2, 0), HUMAN))
    # 4. vehicle fully shadowing a street-level link
    g.append(("vehicle mid", (-25, 0, 1.0), (25, 0, 1.0), (5, 0), VEHICLE))
    # 5. vehicle lateral edge interaction
    g.append(("vehicle edge", (-25, 0, 1.0), (25, 0, 1.0), (0, 2.3), VEHICLE))
    # 6. production-like geometry: BS 10 m high, UE 1.8 m, human near UE
    g.append(("bs-ue human near ue", (100, 0, 10.0), (0, 0, 1.8), (0.5, 0), HUMAN))
    # 7. production-like, vehicle 5 m out
    g.append(("bs-ue vehicle", (100, 0, 10.0), (0, 0, 1.8), (5, 0), VEHICLE))
    # 8. far lateral blocker on a short link
    g.append(("far lateral", (0, 0, 1.5), (10, 0, 1.5), (5, 100), HUMAN))
    # 9. oblique link, blocker near one end
    g.append(("oblique", (-30, -40, 4.0), (30, 35, 1.2), (-20, -27), HUMAN))
    # 10. tall-to-low diagonal with vehicle in the low zone
    g.append(("diagonal low zone", (80, 60, 10.0), (0, 0, 1.2), (1.5, 1.1), VEHICLE))
    return g


def emit_goldens():
    print("// (name, tx, rx, blocker xy, class, wavelength, expected loss dB)")
    for name, tx, rx, b, (w, h) in golden_geometries():
        for tag, lam in (("28", LAMBDA_28), ("140", LAMBDA_140)):
            loss = knife_edge_loss_db(tx, rx, b[0], b[1], w, h, lam)
            print(f"  g(\"{name} @{tag}GHz\", {tx}, {rx}, {b}, {w}, {h}, {lam!r}, {loss!r}),")


# ---------------------------------------------------------------------------
# Link budget pieces
# ---------------------------------------------------------------------------

def pl_umi_los(d3, f_hz):
    return 32.4 + 21.0 * math.log10(d3) + 20.0 * math.log10(f_hz / 1e9)


def pl_umi_nlos(d3, f_hz, h_ue):
    nlos = 22.4 + 35.3 * math.log10(d3) + 21.3 * math.log10(f_hz / 1e9) - 0.3 * (h_ue - 1.5)
    return max(pl_umi_los(d3, f_hz), nlos)


def p_los(d2):
    if d2 <= 0.0:
        return 1.0
    p = min(18.0 / d2, 1.0) * (1.0 - math.exp(-d2 / 36.0)) + math.exp(-d2 / 36.0)
    return min(max(p, 0.0), 1.0)


def noise_dbm(bw, temp, nf):
    return 10.0 * math.log10(KB * temp * bw * 1e3) + nf


def bf_gain_db(mu, mb):
    return 10.0 * math.log10(mu * mb)


def link_budget_checks():
    print("pl_los(100, 28GHz)      =", repr(pl_umi_los(100.0, 28e9)))
    print("pl_los(1, 1GHz)         =", repr(pl_umi_los(1.0, 1e9)))
    print("pl 140-28 delta @100m   =", repr(pl_umi_los(100.0, 140e9) - pl_umi_los(100.0, 28e9)))
    print("pl_nlos(100, 28GHz,1.8) =", repr(pl_umi_nlos(100.0, 28e9, 1.8)))
    print("p_los(0)                =", repr(p_los(0.0)))
    print("p_los(18)               =", repr(p_los(18.0)))
    print("p_los(100)              =", repr(p_los(100.0)))
    print("noise(400MHz,298K,0)    =", repr(noise_dbm(4e8, 298.0, 0.0)))
    print("bf(8,64)                =", repr(bf_gain_db(8, 64)))
    print("bf(64,256)              =", repr(bf_gain_db(64, 256)))
    snr = 23.0 + bf_gain_db(8, 64) - pl_umi_los(100.0, 28e9) - 0.0 - (noise_dbm(4e8, 298.0, 0.0) + 7.0)
    print("snr LOS@100m 28GHz      =", repr(snr))
    print("snr with +40dB blockage =", repr(snr - 40.0))
    print("poisson mean 0.01*pi*200^2 =", repr(0.01 * math.pi * 200.0 ** 2))
    print("eq6 bound P=0,K=4       =", repr((1 - 0.0) * 4 * 7e-4 / 0.02 + 0.0))


# ---------------------------------------------------------------------------
# Front-end power model
# ---------------------------------------------------------------------------

def power_calibration():
    lo_mw = 10.0 ** (10.0 / 10.0)
    implied_28 = (133.7 - lo_mw) / 8.0
    implied_140 = (999.3 - lo_mw) / 64.0
    p_elem = 0.5 * (implied_28 + implied_140)
    fom, il_db = 6.5, 3.0
    il_lin = 10.0 ** (il_db / 10.0)
    cal = p_elem * fom / il_lin
    print("implied per-element mW: 28 ->", repr(implied_28), " 140 ->", repr(implied_140))
    print("p_elem mean =", repr(p_elem))
    print("cal (fom=6.5, il=3dB)  =", repr(cal))
    for n_rx, target in ((8, 133.7), (64, 999.3)):
        p = n_rx * cal * il_lin / fom + lo_mw
        print(f"rffe({n_rx}) = {p!r} mW  (target {target}, rel err {(p - target) / target:+.2e})")
    adc28 = 2 * 65e-15 * 2 ** 8 * 2e9 * 1e3
    adc140 = 2 * 65e-15 * 2 ** 8 * 7e9 * 1e3
    print("adc 28/140 mW =", repr(adc28), repr(adc140))
    print("total 28/140  =", repr(adc28 + 8 * cal * il_lin / fom + lo_mw),
          repr(adc140 + 64 * cal * il_lin / fom + lo_mw))
    # crossover: 64 elements @ 15 /mW vs 8 elements @ 2 /mW
    p64 = 64 * cal * il_lin / 15.0 + lo_mw
    p8 = 8 * cal * il_lin / 2.0 + lo_mw
    print("crossover 64@15 vs 8@2 =", repr(p64), repr(p8), " ratio", repr(p64 / p8))


# ---------------------------------------------------------------------------
# Production-geometry fade ceiling (BS 10 m -> UE 1.8 m, grounded screens)
# ---------------------------------------------------------------------------

def fade_ceiling():
    best = {}
    for lam, tag in ((LAMBDA_28, "28GHz"), (LAMBDA_140, "140GHz")):
        for w, h, cls in (HUMAN + ("human",), VEHICLE + ("vehicle",)):
            m = 0.0
            arg = None
            for d_link in (20.0, 50.0, 100.0, 141.0):
                tx = (d_link, 0.0, 10.0)
                rx = (0.0, 0.0, 1.8)
                for x in [0.02 * i for i in range(1, 500)]:
                    if x >= d_link:
                        break
                    for y in (0.0, 0.05, 0.1):
                        loss = knife_edge_loss_db(tx, rx, x, y, w, h, lam)
                        if loss > m:
                            m, arg = loss, (d_link, x, y)
            best[(tag, cls)] = (m, arg)
    for k, v in best.items():
        print("max loss", k, "=", v)


if __name__ == "__main__":
    print("=== golden knife-edge table ===")
    emit_goldens()
    print("\n=== link budget ===")
    link_budget_checks()
    print("\n=== power model ===")
    power_calibration()
    print("\n=== production-geometry fade ceiling ===")
    fade_ceiling()

#!/usr/bin/env python3
"""Generate a synthetic typical-year EPW file for a central-European site.

The file is a deterministic test fixture: temperatures follow an annual and a
diurnal cycle with seeded synoptic noise, and irradiance comes from a simple
clear-sky model attenuated by a seeded daily cloudiness process. GHI is built
as DNI*sin(altitude) + DHI plus measurement noise, so the beam/diffuse split is
consistent with the sun position for most daylight hours.

Usage: make_synthetic_epw.py OUT.epw [--city Munich --lat 48.13 --lon 11.70
       --tz 1 --elev 529 --tmean 8.8 --tamp 9.6 --seed 7]
"""

import argparse
import math
import random

DAYS_PER_MONTH = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]


def solar_altitude(lat, lon, tz, day_of_year, local_hour):
    decl = math.radians(23.45 * math.sin(math.radians(360.0 * (284 + day_of_year) / 365.0)))
    b = 2.0 * math.pi * (day_of_year - 1) / 365.0
    eot = 229.18 * (0.000075 + 0.001868 * math.cos(b) - 0.032077 * math.sin(b)
                    - 0.014615 * math.cos(2 * b) - 0.040849 * math.sin(2 * b))
    solar_time = local_hour + (4.0 * (lon - 15.0 * tz) + eot) / 60.0
    omega = math.radians(15.0 * (solar_time - 12.0))
    phi = math.radians(lat)
    s = math.sin(phi) * math.sin(decl) + math.cos(phi) * math.cos(decl) * math.cos(omega)
    return math.degrees(math.asin(max(-1.0, min(1.0, s))))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--city", default="Munich")
    ap.add_argument("--country", default="DEU")
    ap.add_argument("--lat", type=float, default=48.13)
    ap.add_argument("--lon", type=float, default=11.70)
    ap.add_argument("--tz", type=float, default=1.0)
    ap.add_argument("--elev", type=float, default=529.0)
    ap.add_argument("--tmean", type=float, default=8.8)
    ap.add_argument("--tamp", type=float, default=9.6)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)

    # daily cloudiness (0 clear .. 1 overcast), AR(1) with seasonal mean
    cloud = []
    c = 0.5
    for d in range(365):
        mean = 0.50 + 0.18 * math.cos(2 * math.pi * (d - 10) / 365.0)
        c = 0.55 * c + 0.45 * mean + rng.gauss(0.0, 0.22)
        cloud.append(min(1.0, max(0.0, c)))

    # synoptic temperature anomaly, AR(1) on hourly scale
    anomaly = 0.0
    rows = []
    hour_index = 0
    for month, ndays in enumerate(DAYS_PER_MONTH, start=1):
        for day in range(1, ndays + 1):
            doy = sum(DAYS_PER_MONTH[: month - 1]) + day
            cd = cloud[doy - 1]
            for hour in range(1, 25):
                anomaly = 0.985 * anomaly + rng.gauss(0.0, 0.42)
                t_seasonal = args.tmean - args.tamp * math.cos(2 * math.pi * (doy - 18) / 365.0)
                diurnal_amp = (2.5 + 4.5 * math.sin(math.pi * (doy - 80) / 365.0) ** 2) * (1.3 - 0.7 * cd)
                t_diurnal = diurnal_amp * math.cos(2 * math.pi * (hour - 15.5) / 24.0)
                dry_bulb = round(t_seasonal + t_diurnal + anomaly, 1)

                alt = solar_altitude(args.lat, args.lon, args.tz, doy, hour - 0.5)
                i0 = 1367.0 * (1.0 + 0.033 * math.cos(2 * math.pi * doy / 365.0))
                if alt > 0.5:
                    sin_alt = math.sin(math.radians(alt))
                    air_mass = 1.0 / (sin_alt + 0.50572 * (alt + 6.07995) ** -1.6364)
                    dni_clear = i0 * 0.7 ** (air_mass ** 0.678)
                    hourly_cloud = min(1.0, max(0.0, cd + rng.gauss(0.0, 0.12)))
                    beam_frac = (1.0 - hourly_cloud) ** 1.3
                    dni = dni_clear * beam_frac
                    dhi = (0.1 + 0.35 * hourly_cloud * (1.0 - hourly_cloud) * 4.0 * 0.5) * dni_clear * sin_alt \
                        + 0.12 * i0 * sin_alt * hourly_cloud
                    ghi = dni * sin_alt + dhi
                    # pyranometer noise; occasional larger deviations
                    noise = rng.gauss(0.0, 12.0)
                    if rng.random() < 0.04:
                        noise += rng.choice([-1.0, 1.0]) * rng.uniform(110.0, 180.0)
                    ghi = max(0.0, ghi + noise)
                    ghi, dni, dhi = round(ghi), round(dni), round(dhi)
                else:
                    ghi = dni = dhi = 0

                ext_hor = round(max(0.0, i0 * math.sin(math.radians(alt))))
                dew = round(dry_bulb - 3.0 - 4.0 * rng.random(), 1)
                rh = max(20, min(100, int(100 - 5 * (dry_bulb - dew))))
                rows.append([
                    1995, month, day, hour, 60, "?9?9?9?9E0?9?9?9*9*9?9?9?9?9?9?9?9?9?9*_*9*9*9*9*9",
                    dry_bulb, dew, rh, 95500, ext_hor, round(i0) if alt > 0 else 0, 300,
                    ghi, dni, dhi, 999999, 999999, 999999, 9999,
                    round(rng.uniform(0, 360)), round(abs(rng.gauss(2.5, 1.5)), 1),
                    round(cd * 10), round(cd * 8), 9999, 99999, 9, 999999999, 999, 0.999, 999, 99,
                    0.2, 0, 0,
                ])
                hour_index += 1

    with open(args.out, "w", newline="\n") as f:
        f.write(f"LOCATION,{args.city},-,{args.country},Synthetic,000000,{args.lat:.2f},{args.lon:.2f},{args.tz:.1f},{args.elev:.1f}\n")
        f.write("DESIGN CONDITIONS,0\n")
        f.write("TYPICAL/EXTREME PERIODS,0\n")
        f.write("GROUND TEMPERATURES,0\n")
        f.write("HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0\n")
        f.write(f"COMMENTS 1,Synthetic typical year generated with seed {args.seed}; not measured data\n")
        f.write("COMMENTS 2,Deterministic fixture for simulation tests\n")
        f.write("DATA PERIODS,1,1,Data,Sunday, 1/ 1,12/31\n")
        for r in rows:
            f.write(",".join(str(v) for v in r) + "\n")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerates the gallery data files and specs.

Penguins and S&P 500 come from public CSVs (palmerpenguins, matplotlib's
Stocks.csv sample). Barley, counties, weather and cars are seeded synthetic
stand-ins with the shape of the classic datasets.

    python3 gallery/make_gallery.py --penguins path/to/penguins.csv --stocks path/to/Stocks.csv
"""

import argparse
import csv
import datetime
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent
DATA = ROOT / "data"
SPECS = ROOT / "specs"


def write_csv(name, header, rows):
    with open(DATA / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_spec(name, spec):
    (SPECS / name).write_text(json.dumps(spec, indent=2) + "\n")


def fig2a():
    # Category O: 15 points at odd x; the third by x is (5, 12).
    o_y = [3, 7, 12, 9, 15, 18, 14, 21, 24, 19, 27, 25, 30, 33, 29]
    x_y = [26, 22, 31, 17, 11, 8, 16, 5, 13, 2]
    rows = []
    for i in range(15):
        rows.append([2 * i + 1, o_y[i], "O"])
        if i < len(x_y):
            rows.append([2 * i + 2, x_y[i], "X"])
    write_csv("fig2a.csv", ["x", "y", "category"], rows)
    write_spec("fig2a.json", {
        "title": "O and X scatterplot",
        "mark": "point",
        "encoding": {
            "x": {"field": "x", "type": "quantitative"},
            "y": {"field": "y", "type": "quantitative"},
            "color": {"field": "category", "type": "nominal",
                      "scale": {"range": ["green", "orange"]}},
        },
    })


def penguins(src):
    with open(src, newline="") as f:
        rows = list(csv.reader(f))
    write_csv("penguins.csv", rows[0], rows[1:])
    write_spec("penguins.json", {
        "title": "Palmer penguins",
        "mark": "point",
        "encoding": {
            "x": {"field": "flipper_length_mm", "type": "quantitative"},
            "y": {"field": "body_mass_g", "type": "quantitative"},
            "color": {"field": "species", "type": "nominal"},
        },
    })


def barley():
    rng = random.Random(1931)
    sites = ["University Farm", "Waseca", "Morris", "Crookston", "Grand Rapids", "Duluth"]
    varieties = ["Svansota", "No. 462", "Manchuria", "No. 475", "Velvet", "Peatland",
                 "Glabron", "No. 457", "Wisconsin No. 38", "Trebi"]
    base = {"University Farm": 32, "Waseca": 48, "Morris": 35, "Crookston": 33,
            "Grand Rapids": 24, "Duluth": 27}
    rows = []
    for year in (1931, 1932):
        for site in sites:
            for variety in varieties:
                y = base[site] + rng.uniform(-8, 12) - (4 if year == 1932 else 0)
                rows.append([round(y, 2), variety, year, site])
    write_csv("barley.csv", ["yield", "variety", "year", "site"], rows)
    write_spec("barley.json", {
        "title": "Barley yields by site",
        "mark": "point",
        "encoding": {
            "x": {"field": "yield", "type": "quantitative"},
            "y": {"field": "variety", "type": "nominal"},
            "color": {"field": "year", "type": "nominal"},
        },
        "facet": {"field": "site", "type": "nominal"},
    })


def counties():
    rng = random.Random(2016)
    states = {
        "Maine": ["Androscoggin", "Aroostook", "Cumberland", "Hancock", "Kennebec", "Penobscot"],
        "Vermont": ["Addison", "Bennington", "Caledonia", "Chittenden", "Windham"],
        "New Hampshire": ["Belknap", "Carroll", "Cheshire", "Coos", "Grafton", "Merrimack",
                          "Strafford"],
        "Rhode Island": ["Bristol", "Kent", "Newport", "Providence", "Washington"],
        "Connecticut": ["Fairfield", "Hartford", "Litchfield", "Middlesex", "New Haven",
                        "New London", "Tolland", "Windham"],
    }
    rows = []
    for state, names in states.items():
        for county in names:
            rows.append([state, county, round(rng.uniform(0.025, 0.09), 3)])
    write_csv("counties.csv", ["state", "county", "rate"], rows)
    write_spec("counties.json", {
        "title": "Unemployment by county",
        "mark": "bar",
        "encoding": {
            "x": {"field": "rate", "type": "quantitative"},
            "y": {"field": "county", "type": "nominal"},
            "color": {"field": "state", "type": "nominal"},
        },
    })


def weather():
    rng = random.Random(2015)
    kinds = ["sun", "rain", "fog", "drizzle", "snow"]
    rows = []
    day = datetime.date(2015, 1, 1)
    while day.year == 2015:
        season = -abs(day.timetuple().tm_yday - 200) / 200
        temp = round(24 + 14 * season + rng.uniform(-4, 4), 1)
        wet = 0.55 + 0.35 * season
        if rng.random() < wet:
            kind = "snow" if temp < 4 else rng.choice(["rain", "rain", "drizzle"])
        else:
            kind = rng.choice(["sun", "sun", "sun", "fog"])
        rows.append([day.isoformat(), day.strftime("%b"), kind, temp])
        day += datetime.timedelta(days=1)
    write_csv("weather.csv", ["date", "month", "weather", "temp_max"], rows)
    write_spec("weather.json", {
        "title": "Seattle weather, 2015",
        "mark": "point",
        "encoding": {
            "x": {"field": "date", "type": "temporal"},
            "y": {"field": "temp_max", "type": "quantitative"},
            "color": {"field": "weather", "type": "nominal"},
        },
    })


def sp500(src):
    rows = []
    with open(src, newline="") as f:
        lines = [line for line in f if not line.startswith("#")]
    for rec in csv.DictReader(lines):
        if rec["^GSPC"]:
            rows.append([rec["Date"], round(float(rec["^GSPC"]), 2)])
    write_csv("sp500.csv", ["date", "price"], rows)
    write_spec("sp500.json", {
        "title": "S&P 500",
        "mark": "line",
        "encoding": {
            "x": {"field": "date", "type": "temporal"},
            "y": {"field": "price", "type": "quantitative"},
        },
        "annotations": [
            {"label": "Dot-com crash", "channel": "x", "range": ["2000-03-01", "2002-10-31"],
             "note": "shaded orange"},
            {"label": "Financial crisis", "channel": "x", "range": ["2007-10-01", "2009-03-31"],
             "note": "shaded blue"},
        ],
    })


def series16():
    rng = random.Random(16)
    rows = [[2000 + i, round(50 + 3 * i + rng.uniform(-6, 6), 1)] for i in range(16)]
    order = list(range(16))
    rng.shuffle(order)
    write_csv("series16.csv", ["year", "value"], [rows[i] for i in order])
    write_spec("series16.json", {
        "title": "Sixteen years",
        "mark": "line",
        "encoding": {
            "x": {"field": "year", "type": "quantitative"},
            "y": {"field": "value", "type": "quantitative"},
        },
    })


def cars():
    rng = random.Random(1983)
    origins = [("USA", 245), ("Europe", 68), ("Japan", 79)]
    rows = []
    for origin, n in origins:
        for _ in range(n):
            hp = rng.randint(46, 230) if origin == "USA" else rng.randint(46, 135)
            mpg = round(max(9.0, min(46.6, 52 - 0.18 * hp + rng.gauss(0, 3.5))), 1)
            rows.append([hp, mpg, origin])
    rng.shuffle(rows)
    write_csv("cars.csv", ["Horsepower", "Miles_per_Gallon", "Origin"], rows)
    write_spec("cars.json", {
        "title": "Cars",
        "mark": "point",
        "encoding": {
            "x": {"field": "Horsepower", "type": "quantitative"},
            "y": {"field": "Miles_per_Gallon", "type": "quantitative"},
            "color": {"field": "Origin", "type": "nominal"},
        },
    })


MANIFEST = [
    {"name": "fig2a", "spec": "specs/fig2a.json", "data": "data/fig2a.csv",
     "variant": "encodingTree"},
    {"name": "penguins", "spec": "specs/penguins.json", "data": "data/penguins.csv",
     "variant": "encodingTree"},
    {"name": "barley", "spec": "specs/barley.json", "data": "data/barley.csv",
     "variant": "facetedTree"},
    {"name": "counties", "spec": "specs/counties.json", "data": "data/counties.csv",
     "variant": "nestedCategoryTree", "drill": [["state", "county"]]},
    {"name": "weather", "spec": "specs/weather.json", "data": "data/weather.csv",
     "variant": "multiBranch", "drill": [["month", "weather"], ["weather", "month"]]},
    {"name": "sp500", "spec": "specs/sp500.json", "data": "data/sp500.csv",
     "variant": "annotationTree"},
    {"name": "sp500_multi", "spec": "specs/sp500.json", "data": "data/sp500.csv",
     "variant": "multiBranch"},
    {"name": "series16", "spec": "specs/series16.json", "data": "data/series16.csv",
     "variant": "binaryTree"},
    {"name": "cars", "spec": "specs/cars.json", "data": "data/cars.csv",
     "variant": "encodingTree"},
    {"name": "cars_table", "spec": "specs/cars.json", "data": "data/cars.csv",
     "variant": "dataTable"},
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--penguins", required=True)
    ap.add_argument("--stocks", required=True)
    args = ap.parse_args()
    DATA.mkdir(exist_ok=True)
    SPECS.mkdir(exist_ok=True)
    fig2a()
    penguins(args.penguins)
    barley()
    counties()
    weather()
    sp500(args.stocks)
    series16()
    cars()
    for entry in MANIFEST:
        entry["golden"] = "golden/" + entry["name"] + ".json"
    (ROOT / "manifest.json").write_text(json.dumps(MANIFEST, indent=2) + "\n")


if __name__ == "__main__":
    main()

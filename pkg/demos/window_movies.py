#!/usr/bin/env python3
"""Window movies at work: record movies along vertical windows, find a
repeat with the diet-path check, pump it, and print the named bounds.
"""

from tilepump import movies
from tilepump.instances import load_fixture


def line_e_movies():
    tas, path = load_fixture("LINE-E")
    print("=== LINE-E movies on every vertical window ===")
    recorded = {}
    for xb in range(0, 5):
        movie = movies.record_movie(tas, path, movies.VerticalWindow(xb))
        recorded[xb] = movie
        events = ", ".join(f"{e.label}@{e.pos}→{e.direction}" for e in movie.events)
        print(f"  window {xb}|{xb + 1}: [{events}]")
    print("equal up to translation:",
          all(movies.movies_equal_upto(recorded[0], recorded[k], (k, 0))
              for k in range(1, 5)))

    print("\n=== diet-path check with a width-4 danger zone ===")
    got = movies.diet_check(tas, path, width=4)
    print(f"  {got}")
    pumped = movies.wml_pump(tas, path, got.w1, got.v)
    print(f"  window-movie pump: {type(pumped).__name__}, "
          f"segment ({pumped.u}, {pumped.v})")


def bounds_table():
    print("\n=== named bounds for |T|=2, |σ|=1 ===")
    params = {"tiles": 2, "seed_size": 1, "n": 1, "w": 3, "h": 2, "v_l1": 1}
    for name in movies.bound_names():
        wanted = movies.bound_params(name)
        rep = movies.bound(name, **{k: params[k] for k in wanted})
        print(f"  {rep.name:>10} = {rep.value}   ({rep.formula})")
    print("(the theoretical width for the danger zone is 2·f_b(B_d)+|σ|, which is")
    print(" astronomically large; the desk-scale toolkit reports the formulas")
    print(" and works inside configurable rectangles instead)")


if __name__ == "__main__":
    line_e_movies()
    bounds_table()

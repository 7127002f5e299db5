#!/usr/bin/env python3
"""Render a figure from simulator CSV output according to a JSON recipe.

Usage:
    python plots/render.py --recipe plots/recipes/fig7.json

A recipe names the figure family, the input CSV file(s), the output
image, and optional style settings:

    {
      "figure": "fig7",
      "inputs": [{"path": "out/fig7.csv"}],
      "output": "out/fig7.png",
      "style": {"logy": false, "legend": {"hrp-upa": "proposed"}}
    }

The scripts consume CSV files only; they never import the simulation
package, so stale physics cannot leak into a figure.
"""

from __future__ import annotations

import argparse
import json
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from csvio import CsvFormatError  # noqa: E402
from fig_pattern import render_fig4, render_fig5  # noqa: E402
from fig_sweep import (render_fig10, render_fig11, render_fig7,  # noqa: E402
                       render_fig8, render_fig9)

RENDERERS = {
    "fig4": (render_fig4, "rect"),
    "fig5": (render_fig5, "polar"),
    "fig7": (render_fig7, "rect"),
    "fig8": (render_fig8, "rect"),
    "fig9": (render_fig9, "rect"),
    "fig10": (render_fig10, "rect"),
    "fig11": (render_fig11, "rect"),
}


class RecipeError(Exception):
    pass


def load_recipe(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            recipe = json.load(fh)
    except OSError as exc:
        raise RecipeError(f"cannot read recipe {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RecipeError(
            f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    if recipe.get("figure") not in RENDERERS:
        raise RecipeError(
            f"recipe must name a figure in {sorted(RENDERERS)}, "
            f"got {recipe.get('figure')!r}")
    if not recipe.get("inputs"):
        raise RecipeError("recipe needs a nonempty 'inputs' list")
    if not recipe.get("output"):
        raise RecipeError("recipe needs an 'output' image path")
    inputs = []
    for item in recipe["inputs"]:
        if isinstance(item, str):
            inputs.append({"path": item})
        elif isinstance(item, dict) and "path" in item:
            inputs.append(item)
        else:
            raise RecipeError(f"bad input entry: {item!r}")
    recipe["inputs"] = inputs
    recipe.setdefault("style", {})
    return recipe


def render(recipe: dict) -> str:
    """Draw the recipe's figure and write the image; returns the path."""
    renderer, projection = RENDERERS[recipe["figure"]]
    style = recipe["style"]
    fig = plt.figure(figsize=tuple(style.get("figsize", (6.0, 4.0))))
    if projection == "polar":
        ax = fig.add_subplot(projection="polar")
    else:
        ax = fig.add_subplot()
    renderer(recipe["inputs"], ax, style)
    if style.get("title"):
        ax.set_title(style["title"])
    fig.tight_layout()
    # strip the library version stamp so identical inputs give identical bytes
    fig.savefig(recipe["output"], dpi=int(style.get("dpi", 150)),
                metadata={"Software": None})
    plt.close(fig)
    return recipe["output"]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--recipe", required=True, help="JSON recipe path")
    args = parser.parse_args(argv)
    try:
        out = render(load_recipe(args.recipe))
    except (RecipeError, CsvFormatError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

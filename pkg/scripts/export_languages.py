"""Write every builtin STLC description to languages/<id>.json."""

from itertools import product
from pathlib import Path

from gensyn import descjson
from gensyn.stlc import Flavour, Stlc, Style

OUT = Path(__file__).resolve().parent.parent / "languages"


def builtins() -> list[Stlc]:
    langs = [Stlc(f, s, b) for f, s, b in product(Flavour, Style, (False, True))]
    langs += [Stlc(Flavour.DESUGARED, s, letrec=True) for s in Style]
    return langs


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for cfg in builtins():
        path = OUT / (cfg.name.replace(":", "-") + ".json")
        path.write_text(descjson.dumps(cfg.description))
        print(path.relative_to(OUT.parent))


if __name__ == "__main__":
    main()

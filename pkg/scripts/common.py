"""Tiny glue: dataclass config <-> command-line flags, and a plain-text table."""
import argparse
import dataclasses
import typing


def parse_config(cls, argv=None):
    p = argparse.ArgumentParser(description=(cls.__doc__ or "").strip())
    hints = typing.get_type_hints(cls)
    for f in dataclasses.fields(cls):
        flag = "--" + f.name.replace("_", "-")
        kind = hints[f.name]
        if kind is bool:
            p.add_argument(flag, action=argparse.BooleanOptionalAction, default=f.default)
        elif typing.get_origin(kind) is tuple:
            item = typing.get_args(kind)[0]
            p.add_argument(flag, default=f.default,
                           type=lambda s, item=item: tuple(item(x) for x in s.split(",") if x),
                           help="comma separated")
        else:
            base = next((a for a in typing.get_args(kind) if a is not type(None)), kind)
            p.add_argument(flag, type=base, default=f.default)
    return cls(**vars(p.parse_args(argv)))


def table(rows: list[dict]) -> str:
    if not rows:
        return "(empty)"
    cols = list(rows[0])
    width = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    line = lambda vals: "  ".join(str(v).ljust(width[c]) for c, v in zip(cols, vals))  # noqa: E731
    return "\n".join([line(cols), line("-" * width[c] for c in cols)] +
                     [line(r[c] for c in cols) for r in rows])

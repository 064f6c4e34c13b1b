import sys


def run(argv=None) -> int:
    # Settings are validated when dynscatter.config is first imported.
    try:
        from dynscatter.cli import main
    except ValueError as exc:
        print(f"dynscatter: configuration error: {exc}", file=sys.stderr)
        return 2
    return main(argv)


if __name__ == "__main__":
    raise SystemExit(run())

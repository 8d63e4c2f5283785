#!/usr/bin/env python3

from relhyp_hub import setup_logging
from relhyp_hub.cli.interface import RelHypCLI


def main() -> int:
    setup_logging()
    cli = RelHypCLI()
    return cli.run()


if __name__ == "__main__":
    exit(main())

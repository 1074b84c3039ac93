import sys

from src.cli.runner import run


def main():
    # Argument parsing, configuration and dispatch live in src/cli/runner.py
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

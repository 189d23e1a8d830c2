import sys

from app.main import main as run_cli


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()

"""
Command line entry point: ``python -m discmeans`` and the ``discmeans`` script
"""
from flask.cli import FlaskGroup

from discmeans import create_app

cli = FlaskGroup(create_app=create_app, add_default_commands=False, load_dotenv=False, help="Disc mean value identities")


def main():
    """Runs the command line"""
    cli.main(prog_name="discmeans")


if __name__ == "__main__":
    main()

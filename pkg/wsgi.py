"""
Application entry point for the ``flask`` command line

    flask --app wsgi verify
    flask --app wsgi characterize --domain square.json --equal-area
"""
from discmeans import create_app

app = create_app()

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Entry point for the nilcover command-line tool.
"""

import sys
import os

# Make sure the project root is on PYTHONPATH
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from cli.app import dispatch
from utils.logger import logger

def main():
    """
    Run one subcommand and exit with its code.
    """
    logger.debug(f"Starting nilcover with arguments: {sys.argv[1:]}")
    sys.exit(dispatch(sys.argv[1:]))

if __name__ == "__main__":
    main()

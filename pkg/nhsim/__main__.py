#!/usr/bin/env python3
'''
Runs the nhsim command line
'''

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())

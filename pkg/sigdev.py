#!/usr/bin/env python3
"""Wrapper script: delegates to the sigdev package."""

import sys

from sigdev.__main__ import main

sys.exit(main())

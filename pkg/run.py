#!/usr/bin/env python
import sys

from ldpbayes import create_cli, main

cli = create_cli()

if __name__ == "__main__":
    sys.exit(main())

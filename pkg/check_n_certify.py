# Date: 18 Oct 2026

# Usage: `python3 check_n_certify.py {validate,bounds,simulate,certify} [flags]`
# See `python3 check_n_certify.py --help` and kscert/cli.py.

import sys

from kscert.cli import main

if __name__ == '__main__':
  sys.exit(main())

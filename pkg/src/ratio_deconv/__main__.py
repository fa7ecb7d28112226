import sys

from ratio_deconv.cli import main

sys.exit(main())

import os
import sys

from dotenv import load_dotenv

# Load environment variables from .nmcodeenv
load_dotenv(os.environ.get('NMCODE_ENV_FILE', '.nmcodeenv'))

from nmcode.cli import main

if __name__ == "__main__":
    sys.exit(main())

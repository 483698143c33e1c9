"""Allow running as python -m agr."""

from .main import main

if __name__ == "__main__":
    main()

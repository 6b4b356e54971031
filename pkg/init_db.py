#!/usr/bin/env python3
"""
nmcode Database Initialization Script

Configures the database used to record audit runs and SMT sessions and
initializes the schema. SQLite under instance/ is the default; PostgreSQL
is supported through the psycopg driver.
"""

import argparse
import configparser
import os
import sys
from getpass import getpass
from urllib.parse import quote_plus

from dotenv import load_dotenv
from sqlalchemy import create_engine, inspect

# Load environment variables
load_dotenv(os.environ.get('NMCODE_ENV_FILE', '.nmcodeenv'))

# Add current directory to path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from extensions import db  # noqa: E402

INSTANCE_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'instance')
CONFIG_PATH = os.path.join(INSTANCE_PATH, 'nmcode.conf')


def sqlite_url(path=None):
    return f"sqlite:///{path or os.path.join(INSTANCE_PATH, 'nmcode.db')}"


def postgres_url(creds):
    """
    Build a psycopg connection string.

    Args:
        creds: Dictionary with host, port, dbname, user, password
    """
    escaped_password = quote_plus(creds['password'])
    return (f"postgresql+psycopg://{creds['user']}:{escaped_password}"
            f"@{creds['host']}:{creds['port']}/{creds['dbname']}")


def get_db_credentials(config):
    """
    Prompts the user for PostgreSQL connection details.

    Args:
        config: ConfigParser instance with existing config (if any)

    Returns:
        Dictionary with database credentials
    """
    print("\nCurrent/Default values are shown in brackets.\n")

    db_details = {
        'host': config.get('database', 'db_host', fallback='localhost'),
        'port': config.get('database', 'db_port', fallback='5432'),
        'user': config.get('database', 'db_user', fallback='nmcode_user'),
        'dbname': config.get('database', 'db_name', fallback='nmcode_db'),
    }

    host = input(f"PostgreSQL Host [{db_details['host']}]: ") or db_details['host']
    port = input(f"PostgreSQL Port [{db_details['port']}]: ") or db_details['port']
    dbname = input(f"Database Name [{db_details['dbname']}]: ") or db_details['dbname']
    user = input(f"Database User [{db_details['user']}]: ") or db_details['user']
    password = getpass("Database Password: ")

    if not password:
        print("\n✗ Password is required!")
        sys.exit(1)

    return {'host': host, 'port': port, 'dbname': dbname, 'user': user, 'password': password}


def test_db_connection(conn_string):
    """
    Tests the database connection.

    Returns:
        True when a connection could be opened
    """
    print("\n→ Testing database connection...")
    try:
        engine = create_engine(conn_string)
        with engine.connect():
            print("✓ Database connection successful")
            return True
    except Exception as e:
        print(f"✗ Connection failed: {e}")
        return False


def save_config(conn_string, creds=None):
    """Saves the connection string (and non-secret details) to instance/nmcode.conf."""
    os.makedirs(INSTANCE_PATH, exist_ok=True)
    config = configparser.RawConfigParser()
    config.add_section('database')
    config.set('database', 'connection_string', conn_string)
    if creds:
        config.set('database', 'db_host', creds['host'])
        config.set('database', 'db_port', creds['port'])
        config.set('database', 'db_name', creds['dbname'])
        config.set('database', 'db_user', creds['user'])

    with open(CONFIG_PATH, 'w') as configfile:
        config.write(configfile)

    print(f"✓ Configuration saved to: {CONFIG_PATH}")


def create_schema(conn_string):
    """Create all tables and return their names."""
    db.init_engine(conn_string)
    db.create_all()
    return inspect(db.engine).get_table_names()


def init_db_headless(db_url=None, db_host=None, db_port='5432', db_name='nmcode_db',
                     db_user='nmcode_user', db_password=None):
    """Non-interactive initialization: an explicit URL, PostgreSQL details, or the SQLite default."""
    print("\n" + "=" * 60)
    print("NMCODE DATABASE INITIALIZATION (HEADLESS MODE)")
    print("=" * 60)

    creds = None
    if db_url:
        conn_string = db_url
    elif db_host and db_password:
        creds = {'host': db_host, 'port': db_port, 'dbname': db_name, 'user': db_user, 'password': db_password}
        conn_string = postgres_url(creds)
    else:
        os.makedirs(INSTANCE_PATH, exist_ok=True)
        conn_string = sqlite_url()

    if not test_db_connection(conn_string):
        sys.exit(1)
    save_config(conn_string, creds)

    try:
        tables = create_schema(conn_string)
    except Exception as e:
        print(f"✗ Failed to initialize database schema: {e}", file=sys.stderr)
        sys.exit(1)
    print(f"✓ Database schema initialized ({len(tables)} tables)")


def init_db():
    """
    Main initialization function.

    Interactively picks SQLite or PostgreSQL and initializes the schema.
    """
    config = configparser.RawConfigParser()
    if os.path.exists(CONFIG_PATH):
        config.read(CONFIG_PATH)
        print(f"\nFound existing configuration: {CONFIG_PATH}")

    choice = input("Database backend, sqlite or postgres [sqlite]: ").strip().lower() or 'sqlite'
    creds = None
    if choice == 'postgres':
        while True:
            creds = get_db_credentials(config)
            conn_string = postgres_url(creds)
            if test_db_connection(conn_string):
                break
            retry = input("\nRetry connection? (y/n): ")
            if retry.lower() != 'y':
                print("\n✗ Database configuration aborted.")
                sys.exit(1)
    else:
        os.makedirs(INSTANCE_PATH, exist_ok=True)
        conn_string = sqlite_url()

    save_config(conn_string, creds)

    try:
        tables = create_schema(conn_string)
    except Exception as e:
        print(f"\n✗ Failed to initialize database schema: {e}")
        sys.exit(1)

    print("\nCreated tables:")
    for table in tables:
        print(f"  - {table}")
    print(f"\nRuns are now recorded (connection string in {CONFIG_PATH};")
    print("NMCODE_DATABASE_URL overrides it).")
    print()


if __name__ == '__main__':
    parser = argparse.ArgumentParser(
        description='Initialize the nmcode run database',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('--headless', action='store_true', help='Non-interactive mode for automated installation')
    parser.add_argument('--db-url', type=str, help='Full SQLAlchemy URL (overrides the other options)')
    parser.add_argument('--db-host', type=str, help='PostgreSQL host (SQLite is used when omitted)')
    parser.add_argument('--db-port', type=str, default='5432', help='Database port (default: 5432)')
    parser.add_argument('--db-name', type=str, default='nmcode_db', help='Database name (default: nmcode_db)')
    parser.add_argument('--db-user', type=str, default='nmcode_user', help='Database user (default: nmcode_user)')
    parser.add_argument('--db-password', type=str, help='Database password (required with --db-host)')

    args = parser.parse_args()

    try:
        if args.headless:
            if args.db_host and not args.db_password:
                print("ERROR: --db-password is required with --db-host", file=sys.stderr)
                sys.exit(1)
            init_db_headless(db_url=args.db_url, db_host=args.db_host, db_port=args.db_port,
                             db_name=args.db_name, db_user=args.db_user, db_password=args.db_password)
        else:
            init_db()
    except KeyboardInterrupt:
        print("\n\n✗ Setup cancelled by user.")
        sys.exit(1)

import setuptools

with open('README.md') as infile:
    long_description = infile.read()

with open('VERSION') as infile:
    version = infile.read().strip()

setuptools.setup(
    name='qembound',
    version=version,
    description='Sample cost lower bounds for quantum error mitigation',
    long_description=long_description,
    long_description_content_type='text/markdown; charset=UTF-8',
    python_requires='>=3.8.0',
    packages=setuptools.find_packages(exclude=('tests', )),
    install_requires=['numpy>=1.20', 'scipy>=1.6'],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['qembound=qembound.cli:main']},
    include_package_data=True,
    license='MIT',
    keywords='quantum error mitigation sampling complexity bound noise',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    zip_safe=True
)
